"""Batch front door: every pipeline stage scriptable without the UI.

Each subcommand is a thin wrapper over one library call, so CLI results are
bit-identical to library results. Exit codes: 0 success, 1 usage error,
2 data error (malformed files, schema or checksum problems), 3 numeric or
graph error (disconnected neighbor graph, failed mean placement). Every
subcommand accepts --format json for machine-readable output; defaults echo
a short human summary. File-writing flags default to conventional names in
the working directory (data.csv, dtm.csv, embedding.csv, result.json,
report.json) so the stages chain without repeating paths.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from pathlib import Path

from .dataset import GroupedDataset
from .dpmeans import DpConfig, dp_means
from .errors import DataError, GenerationError, GraphError, UsageError
from .gendata import GenConfig, GroupedGenConfig, generate_grouped, generate_single, truth_dict
from .hdpmeans import HierConfig, hdp_means
from .io_store import (
    ResultArchive,
    archive_id,
    read_dataset,
    read_result,
    write_dataset,
    write_doc_term,
    write_embedding,
    write_result,
)
from .isomap import isomap
from .selection import LambdaGrid, SelectionReport, select_lambda
from .text import build_vocabulary, encode, read_corpus, read_stopwords


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems as exceptions.

    The stock parser exits with status 2 on bad flags; this tool reserves 2
    for data errors, so usage problems are raised and mapped to exit 1.
    """

    def error(self, message):
        raise UsageError(message)


def parse_grid(text: str) -> LambdaGrid:
    """lo:hi:steps, an inclusive linear grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be lo:hi:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid must be lo:hi:steps with numeric parts, got {text!r}") from None
    return LambdaGrid.linear(lo, hi, steps)


def _parse_usage_spec(text: str):
    """Per-group usage: entries split by ';', values by ','.

    All-integer entries are cluster subsets; anything else is read as a
    probability vector over the global clusters.
    """
    out = []
    for entry in text.split(";"):
        tokens = [t for t in entry.split(",") if t.strip()]
        if not tokens:
            raise UsageError(f"empty usage entry in {text!r}")
        try:
            values = tuple(int(t) for t in tokens)
        except ValueError:
            try:
                values = tuple(float(t) for t in tokens)
            except ValueError:
                raise UsageError(f"usage entry {entry!r} is not numeric") from None
        out.append(values)
    return tuple(out)


def _emit(summary: dict, lines: list[str], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(summary, indent=2))
    else:
        for line in lines:
            print(line)


# ---------------------------------------------------------------------------
# Subcommand handlers


def _cmd_gen(args) -> None:
    seed = args.seed
    if seed is None:
        seed = secrets.randbelow(2**32)
    common = dict(
        k_true=args.k,
        n_per_cluster=args.n,
        d=args.dim,
        separation=args.sep,
        sigma=args.sigma,
        seed=seed,
    )
    out = Path(args.out)
    truth_path = out.with_suffix(".truth.json")
    if args.groups is not None:
        usage = _parse_usage_spec(args.usage) if args.usage else None
        config = GroupedGenConfig(groups=args.groups, usage=usage, **common)
        data, true_local, true_global, means = generate_grouped(config)
        truth = truth_dict(config, means, true_local=true_local, true_global=true_global)
    else:
        config = GenConfig(**common)
        data, labels, means = generate_single(config)
        truth = truth_dict(config, means, true_labels=labels)
    write_dataset(data, out)
    truth_path.write_text(json.dumps(truth, indent=2) + "\n", encoding="utf-8")
    summary = {
        "seed": seed,
        "n": data.n,
        "d": data.d,
        "k_true": args.k,
        "out": str(out),
        "truth": str(truth_path),
    }
    lines = [
        f"seed: {seed}",
        f"wrote {data.n} x {data.d} dataset to {out}",
        f"wrote truth sidecar to {truth_path}",
    ]
    _emit(summary, lines, args.format)


def _cmd_encode(args) -> None:
    stopwords = read_stopwords(args.stopwords) if args.stopwords else set()
    corpus = read_corpus(args.input, stopwords=stopwords)
    vocab = build_vocabulary(corpus)
    dtm = encode(corpus, vocab, encoding=args.mode)
    write_doc_term(dtm, args.out)
    summary = {
        "documents": len(corpus.documents),
        "terms": len(vocab),
        "mode": args.mode,
        "out": args.out,
    }
    lines = [
        f"encoded {len(corpus.documents)} documents over {len(vocab)} terms "
        f"({args.mode}) to {args.out}"
    ]
    _emit(summary, lines, args.format)


def _cmd_isomap(args) -> None:
    data = read_dataset(args.input)
    emb = isomap(data, k=args.neighbors, m=args.dim, largest_component=args.largest_component)
    write_embedding(emb, args.out)
    summary = {
        "n": emb.coords.shape[0],
        "m": emb.m,
        "neighbors": args.neighbors,
        "dropped": len(emb.dropped_row_ids),
        "eigenvalues": [float(v) for v in emb.eigenvalues],
        "out": args.out,
    }
    lines = [f"embedded {emb.coords.shape[0]} points into {emb.m} dims, wrote {args.out}"]
    if emb.dropped_row_ids:
        lines.append(f"dropped {len(emb.dropped_row_ids)} points outside the largest component")
    _emit(summary, lines, args.format)


def _dp_config_from_args(args, lam: float) -> DpConfig:
    return DpConfig(
        lam=lam,
        max_clusters=args.max_k,
        max_iter=args.max_iter,
        tol=args.tol,
        seed=args.seed,
        standardize=args.standardize,
    )


def _cmd_cluster(args) -> None:
    if (args.lam is None) == (args.select is None):
        raise UsageError("exactly one of --lambda or --select is required")
    data = read_dataset(args.input)
    report: SelectionReport | None = None
    if args.select is not None:
        if args.grid is None:
            raise UsageError("--select requires --grid lo:hi:steps")
        grid = parse_grid(args.grid)
        base = _dp_config_from_args(args, 0.0)
        report = select_lambda(data, args.select, grid, base, folds=args.folds)
        lam = report.chosen_lambda
    else:
        if args.lam <= 0:
            raise UsageError(f"--lambda must be positive, got {args.lam:g}")
        lam = args.lam
    config = _dp_config_from_args(args, lam)
    partition = dp_means(data, config)
    archive = ResultArchive(
        kind="cluster", config=config, partition=partition, selection_report=report
    )
    write_result(archive, args.out)
    summary = {
        "k": partition.k,
        "sizes": partition.sizes.tolist(),
        "objective": partition.objective,
        "lambda": lam,
        "iterations": partition.iterations,
        "result_id": archive_id(archive),
        "out": args.out,
    }
    lines = []
    if report is not None:
        summary["method"] = report.method
        lines.append(f"selected lambda {lam:g} by {report.method}")
    lines.append(
        f"K={partition.k} clusters, sizes {partition.sizes.tolist()}, "
        f"objective {partition.objective:.6g}"
    )
    lines.append(f"wrote {args.out}")
    _emit(summary, lines, args.format)


def _cmd_hcluster(args) -> None:
    if args.lam_global <= 0 or args.lam_local <= 0:
        raise UsageError("--lambda-global and --lambda-local must be positive")
    data = read_dataset(args.input, group_col_name=args.group)
    if not isinstance(data, GroupedDataset):
        raise DataError(f"{args.input}: no {args.group!r} column to group by")
    config = HierConfig(
        lam_global=args.lam_global,
        lam_local=args.lam_local,
        max_global_clusters=args.max_k,
        max_iter=args.max_iter,
        tol=args.tol,
        seed=args.seed,
    )
    hp = hdp_means(data, config)
    archive = ResultArchive(kind="hcluster", config=config, hier_partition=hp)
    write_result(archive, args.out)
    locals_per_group = {g: len(cl) for g, cl in hp.local.items()}
    summary = {
        "k_global": hp.k_global,
        "locals_per_group": locals_per_group,
        "objective": hp.objective,
        "lambda_global": args.lam_global,
        "lambda_local": args.lam_local,
        "iterations": hp.iterations,
        "result_id": archive_id(archive),
        "out": args.out,
    }
    lines = [
        f"K_global={hp.k_global}, locals per group {locals_per_group}, "
        f"objective {hp.objective:.6g}",
        f"wrote {args.out}",
    ]
    _emit(summary, lines, args.format)


def _cmd_select(args) -> None:
    data = read_dataset(args.input)
    grid = parse_grid(args.grid)
    base = _dp_config_from_args(args, 0.0)
    report = select_lambda(data, args.method, grid, base, folds=args.folds)
    doc = {
        "method": report.method,
        "grid": list(report.grid.values),
        "scores": [None if s is None else s for s in report.scores],
        "k_per_lambda": report.k_per_lambda,
        "chosen_lambda": report.chosen_lambda,
        "chosen_k": report.chosen_k,
        "folds": report.folds,
        "seed": report.seed,
    }
    Path(args.out).write_text(json.dumps(doc, indent=2, default=str) + "\n", encoding="utf-8")
    summary = dict(doc, out=args.out)
    lines = [
        f"{report.method}: chose lambda {report.chosen_lambda:g} (K={report.chosen_k})",
        f"wrote {args.out}",
    ]
    _emit(summary, lines, args.format)


def _summarize_archive(archive: ResultArchive) -> dict:
    out: dict = {"kind": archive.kind}
    if archive.partition is not None:
        p = archive.partition
        out.update(
            k=p.k,
            sizes=p.sizes.tolist(),
            objective=p.objective,
            iterations=p.iterations,
        )
        out["lambda"] = archive.config.lam
    if archive.hier_partition is not None:
        h = archive.hier_partition
        out.update(
            k_global=h.k_global,
            locals_per_group={g: len(cl) for g, cl in h.local.items()},
            objective=h.objective,
            iterations=h.iterations,
        )
        out["lambda_global"] = archive.config.lam_global
        out["lambda_local"] = archive.config.lam_local
    if archive.selection_report is not None:
        r = archive.selection_report
        out.update(method=r.method, chosen_lambda=r.chosen_lambda, chosen_k=r.chosen_k)
    return out


def _cmd_report(args) -> None:
    archive = read_result(args.file)
    summary = _summarize_archive(archive)
    if args.format == "json":
        print(json.dumps(summary, indent=2))
        return
    if args.format == "csv":
        print("key,value")
        for key, value in summary.items():
            if isinstance(value, list):
                value = ";".join(str(v) for v in value)
            elif isinstance(value, dict):
                value = ";".join(f"{k}={v}" for k, v in value.items())
            print(f"{key},{value}")
        return
    for key, value in summary.items():
        print(f"{key}: {value}")


def _cmd_serve(args) -> None:
    import uvicorn

    from .service import create_app

    app = create_app(
        workspace_dir=args.workspace,
        max_upload_mb=args.max_upload_mb,
        workers=args.workers,
        frontend_dir=args.frontend,
    )
    uvicorn.run(app, host=args.host, port=args.port)


# ---------------------------------------------------------------------------
# Parser assembly


def _add_common_fit_flags(p: _Parser) -> None:
    p.add_argument("--max-k", type=int, default=20, help="cluster cap (default 20)")
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--standardize", action="store_true", help="z-score columns before the fit")


def _add_format_flag(p: _Parser, choices=("text", "json")) -> None:
    p.add_argument("--format", choices=list(choices), default="text")


def build_parser() -> _Parser:
    parser = _Parser(prog="penclust", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate synthetic clustered data")
    p.add_argument("--k", type=int, required=True, help="number of planted clusters")
    p.add_argument("--n", type=int, required=True, help="points per cluster")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--sep", type=float, required=True, help="min pairwise mean distance, units of sigma")
    p.add_argument("--sigma", type=float, required=True, help="isotropic noise scale")
    p.add_argument("--seed", type=int, help="omit to draw one (it is printed)")
    p.add_argument("--groups", type=int, help="emit grouped data with this many groups")
    p.add_argument(
        "--usage",
        help="per-group cluster usage, entries split by ';': "
        "int subsets like '0,1;1,2' or probability vectors like '0.5,0.5;0,1'",
    )
    p.add_argument("--out", default="data.csv")
    _add_format_flag(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("encode", help="encode a text corpus as a document-term matrix")
    p.add_argument("--input", required=True, help="directory of .txt files or a JSON-lines file")
    p.add_argument("--mode", choices=["raw", "binary"], default="raw")
    p.add_argument("--stopwords", help="file with one stopword per line")
    p.add_argument("--out", default="dtm.csv")
    _add_format_flag(p)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("isomap", help="nonlinear dimension reduction via geodesic embedding")
    p.add_argument("--input", default="data.csv")
    p.add_argument("--neighbors", type=int, required=True)
    p.add_argument("--dim", type=int, required=True, help="target dimension")
    p.add_argument(
        "--largest-component",
        action="store_true",
        help="embed the largest connected component instead of failing",
    )
    p.add_argument("--out", default="embedding.csv")
    _add_format_flag(p)
    p.set_defaults(func=_cmd_isomap)

    p = sub.add_parser("cluster", help="penalized clustering with a known or selected lambda")
    p.add_argument("--input", default="data.csv")
    p.add_argument("--lambda", dest="lam", type=float, help="per-cluster penalty")
    p.add_argument(
        "--select",
        choices=["cv", "sil", "silhouette", "ch", "calinski_harabasz"],
        help="pick lambda from --grid by this criterion instead of giving it",
    )
    p.add_argument("--grid", help="lo:hi:steps candidate penalties for --select")
    p.add_argument("--folds", type=int, default=5, help="folds for --select cv")
    _add_common_fit_flags(p)
    p.add_argument("--out", default="result.json")
    _add_format_flag(p)
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("hcluster", help="two-level clustering of grouped data")
    p.add_argument("--input", default="data.csv")
    p.add_argument("--group", default="group", help="header name of the group column")
    p.add_argument("--lambda-global", dest="lam_global", type=float, required=True)
    p.add_argument("--lambda-local", dest="lam_local", type=float, required=True)
    _add_common_fit_flags(p)
    p.add_argument("--out", default="result.json")
    _add_format_flag(p)
    p.set_defaults(func=_cmd_hcluster)

    p = sub.add_parser("select", help="score a lambda grid and report the best value")
    p.add_argument("--input", default="data.csv")
    p.add_argument(
        "--method",
        required=True,
        choices=["cv", "sil", "silhouette", "ch", "calinski_harabasz"],
    )
    p.add_argument("--grid", required=True, help="lo:hi:steps")
    p.add_argument("--folds", type=int, default=5)
    _add_common_fit_flags(p)
    p.add_argument("--out", default="report.json")
    _add_format_flag(p)
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("report", help="summarize a stored result archive")
    p.add_argument("file", nargs="?", default="result.json")
    _add_format_flag(p, choices=("text", "json", "csv"))
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--workspace", default=None, help="workspace directory (env WORKSPACE_DIR)")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--max-upload-mb", type=int, default=None)
    p.add_argument("--frontend", default=None, help="static directory to serve at /")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
        return 0
    except SystemExit as exc:  # argparse --help
        return exc.code if isinstance(exc.code, int) else 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except (GraphError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
