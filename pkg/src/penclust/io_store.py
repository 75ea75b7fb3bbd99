"""File formats and the workspace registry.

CSV is the dataset interchange format (comma, quote-doubling, UTF-8, LF):
header row = variable names, optional leading ``id`` column, optional
``group`` column for grouped data. Results round-trip through a versioned
JSON archive. A workspace is a managed directory of named datasets with a
checksummed manifest, standing in for an interactive session's loaded
objects.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import shutil
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from filelock import FileLock

from .dataset import Dataset, GroupedDataset
from .dpmeans import DpConfig, Partition
from .errors import DataError, IntegrityError, SchemaError
from .hdpmeans import HierConfig, HierPartition, LocalCluster
from .isomap import Embedding
from .selection import LambdaGrid, SelectionReport
from .text import DocTermMatrix

SCHEMA_VERSION = 1

_ID_COL = "id"
_GROUP_COL = "group"


# ---------------------------------------------------------------------------
# Dataset CSV


def read_dataset(
    path: str | Path, group_col_name: str = _GROUP_COL
) -> Dataset | GroupedDataset:
    """Parse a dataset CSV; returns GroupedDataset when a group column exists.

    ``group_col_name`` selects which header name carries sub-domain labels
    (default "group"). Numeric coercion failures are reported with their
    (row, column) position, 1-based counting the header as row 1.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        rows = list(reader)

    if not header or any(not name.strip() for name in header):
        raise DataError(f"{path}: malformed header (empty column name)")
    if len(set(header)) != len(header):
        raise DataError(f"{path}: duplicate column names in header")

    has_id = header[0] == _ID_COL
    group_col = header.index(group_col_name) if group_col_name in header else None
    value_cols = [
        j
        for j in range(len(header))
        if not (has_id and j == 0) and j != group_col
    ]
    if not value_cols:
        raise DataError(f"{path}: no numeric columns")

    ids: list[str] = []
    groups: list[str] = []
    values = np.empty((len(rows), len(value_cols)))
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise DataError(
                f"{path}: row {r + 2} has {len(row)} fields, expected {len(header)}"
            )
        if has_id:
            ids.append(row[0])
        if group_col is not None:
            groups.append(row[group_col])
        for out_j, j in enumerate(value_cols):
            try:
                values[r, out_j] = float(row[j])
            except ValueError:
                raise DataError(
                    f"{path}: non-numeric value {row[j]!r} at row {r + 2}, "
                    f"column {header[j]!r}"
                ) from None

    if len(rows) == 0:
        raise DataError(f"{path}: no data rows")
    if has_id and len(set(ids)) != len(ids):
        raise DataError(f"{path}: duplicate ids")

    var_names = [header[j] for j in value_cols]
    kwargs = dict(values=values, var_names=var_names, row_ids=ids or [])
    if group_col is not None:
        return GroupedDataset(group=groups, **kwargs)
    return Dataset(**kwargs)


def write_dataset(data: Dataset, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = [_ID_COL]
        if isinstance(data, GroupedDataset):
            header.append(_GROUP_COL)
        header.extend(data.var_names)
        writer.writerow(header)
        for i in range(data.n):
            row: list = [data.row_ids[i]]
            if isinstance(data, GroupedDataset):
                row.append(data.group[i])
            row.extend(repr(float(v)) for v in data.values[i])
            writer.writerow(row)


def write_embedding(emb: Embedding, path: str | Path) -> None:
    """CSV with header row_id, dim_1..dim_m."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["row_id"] + [f"dim_{j + 1}" for j in range(emb.m)])
        for i, rid in enumerate(emb.row_ids):
            writer.writerow([rid] + [repr(float(v)) for v in emb.coords[i]])


def write_doc_term(dtm: DocTermMatrix, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([_ID_COL] + list(dtm.vocab.terms))
        for i, doc_id in enumerate(dtm.doc_ids):
            writer.writerow([doc_id] + [int(v) for v in dtm.counts[i]])


# ---------------------------------------------------------------------------
# Result archives


@dataclass(eq=False)
class ResultArchive:
    """Versioned container for one run: config, result, optional report."""

    kind: str
    config: DpConfig | HierConfig
    partition: Partition | None = None
    hier_partition: HierPartition | None = None
    selection_report: SelectionReport | None = None
    timings: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.kind not in ("cluster", "hcluster", "select"):
            raise SchemaError(f"unknown archive kind {self.kind!r}")
        if self.kind == "cluster" and self.partition is None:
            raise SchemaError("cluster archive requires a partition")
        if self.kind == "hcluster" and self.hier_partition is None:
            raise SchemaError("hcluster archive requires a hier_partition")
        if self.kind == "select" and self.selection_report is None:
            raise SchemaError("select archive requires a selection_report")


def _dp_config_dict(cfg: DpConfig) -> dict:
    return {
        "lambda": cfg.lam,
        "max_clusters": cfg.max_clusters,
        "max_iter": cfg.max_iter,
        "tol": cfg.tol,
        "seed": cfg.seed,
        "standardize": cfg.standardize,
    }


def _hier_config_dict(cfg: HierConfig) -> dict:
    return {
        "lambda_global": cfg.lam_global,
        "lambda_local": cfg.lam_local,
        "max_global_clusters": cfg.max_global_clusters,
        "max_iter": cfg.max_iter,
        "tol": cfg.tol,
        "seed": cfg.seed,
    }


def _partition_dict(p: Partition) -> dict:
    return {
        "labels": p.labels.tolist(),
        "centroids": p.centroids.tolist(),
        "k": p.k,
        "objective": p.objective,
        "iterations": p.iterations,
        "sizes": p.sizes.tolist(),
        "trace": list(p.trace),
    }


def _hier_partition_dict(hp: HierPartition) -> dict:
    return {
        "global_centroids": hp.global_centroids.tolist(),
        "groups": [
            {
                "name": gname,
                "clusters": [
                    {"members": list(c.members), "global_index": c.global_index}
                    for c in clusters
                ],
            }
            for gname, clusters in hp.local.items()
        ],
        "labels_local": hp.labels_local.tolist(),
        "labels_global": hp.labels_global.tolist(),
        "objective": hp.objective,
        "iterations": hp.iterations,
        "trace": list(hp.trace),
    }


def _score_to_json(score):
    if score is None:
        return None
    if math.isinf(score):
        return "infinite"
    return score


def _score_from_json(value):
    if value is None:
        return None
    if value == "infinite":
        return math.inf
    return float(value)


def _report_dict(r: SelectionReport) -> dict:
    return {
        "method": r.method,
        "grid": list(r.grid.values),
        "scores": [_score_to_json(s) for s in r.scores],
        "k_per_lambda": list(r.k_per_lambda),
        "chosen_lambda": r.chosen_lambda,
        "chosen_k": r.chosen_k,
        "folds": r.folds,
        "seed": r.seed,
    }


def archive_to_dict(archive: ResultArchive) -> dict:
    out = {
        "schema_version": archive.schema_version,
        "kind": archive.kind,
        "timings": dict(archive.timings),
    }
    if isinstance(archive.config, HierConfig):
        out["config"] = _hier_config_dict(archive.config)
    else:
        out["config"] = _dp_config_dict(archive.config)
    out["partition"] = _partition_dict(archive.partition) if archive.partition else None
    out["hier_partition"] = (
        _hier_partition_dict(archive.hier_partition) if archive.hier_partition else None
    )
    out["selection_report"] = (
        _report_dict(archive.selection_report) if archive.selection_report else None
    )
    return out


def _require(d: dict, key: str):
    if key not in d:
        raise SchemaError(f"archive is missing required field {key!r}")
    return d[key]


def archive_from_dict(doc: dict) -> ResultArchive:
    version = _require(doc, "schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(
            f"archive schema version {version} is not supported (expected {SCHEMA_VERSION})"
        )
    kind = _require(doc, "kind")
    cfg_dict = _require(doc, "config")
    if kind == "hcluster":
        config: DpConfig | HierConfig = HierConfig(
            lam_global=_require(cfg_dict, "lambda_global"),
            lam_local=_require(cfg_dict, "lambda_local"),
            max_global_clusters=cfg_dict.get("max_global_clusters", 20),
            max_iter=cfg_dict.get("max_iter", 100),
            tol=cfg_dict.get("tol", 1e-8),
            seed=cfg_dict.get("seed", 0),
        )
    else:
        config = DpConfig(
            lam=_require(cfg_dict, "lambda"),
            max_clusters=cfg_dict.get("max_clusters", 20),
            max_iter=cfg_dict.get("max_iter", 100),
            tol=cfg_dict.get("tol", 1e-8),
            seed=cfg_dict.get("seed", 0),
            standardize=cfg_dict.get("standardize", False),
        )

    partition = None
    if doc.get("partition") is not None:
        p = doc["partition"]
        partition = Partition(
            labels=np.asarray(_require(p, "labels"), dtype=int),
            centroids=np.asarray(_require(p, "centroids"), dtype=float),
            k=_require(p, "k"),
            objective=_require(p, "objective"),
            iterations=p.get("iterations", 0),
            sizes=np.asarray(_require(p, "sizes"), dtype=int),
            trace=list(p.get("trace", [])),
        )

    hier_partition = None
    if doc.get("hier_partition") is not None:
        h = doc["hier_partition"]
        local = {
            g["name"]: [
                LocalCluster(members=list(c["members"]), global_index=c["global_index"])
                for c in g["clusters"]
            ]
            for g in _require(h, "groups")
        }
        hier_partition = HierPartition(
            global_centroids=np.asarray(_require(h, "global_centroids"), dtype=float),
            local=local,
            labels_local=np.asarray(_require(h, "labels_local"), dtype=int),
            labels_global=np.asarray(_require(h, "labels_global"), dtype=int),
            objective=_require(h, "objective"),
            iterations=h.get("iterations", 0),
            trace=list(h.get("trace", [])),
        )

    report = None
    if doc.get("selection_report") is not None:
        r = doc["selection_report"]
        report = SelectionReport(
            method=_require(r, "method"),
            grid=LambdaGrid(tuple(_require(r, "grid"))),
            scores=[_score_from_json(s) for s in _require(r, "scores")],
            k_per_lambda=list(_require(r, "k_per_lambda")),
            chosen_lambda=_require(r, "chosen_lambda"),
            chosen_k=_require(r, "chosen_k"),
            seed=r.get("seed", 0),
            folds=r.get("folds"),
        )

    return ResultArchive(
        kind=kind,
        config=config,
        partition=partition,
        hier_partition=hier_partition,
        selection_report=report,
        timings=doc.get("timings", {}),
        schema_version=version,
    )


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def archive_id(archive: ResultArchive) -> str:
    """Content-addressed id: sha256 of the canonical archive JSON.

    Timings are excluded from the hash so wall-clock noise does not
    change the id of an otherwise identical result.
    """
    doc = archive_to_dict(archive)
    doc.pop("timings", None)
    digest = hashlib.sha256(canonical_json(doc).encode()).hexdigest()
    return digest[:16]


def write_result(archive: ResultArchive, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(archive_to_dict(archive), indent=2) + "\n", encoding="utf-8"
    )


def read_result(path: str | Path) -> ResultArchive:
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    return archive_from_dict(doc)


# ---------------------------------------------------------------------------
# Workspace


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class WorkspaceEntry:
    name: str
    path: str
    sha256: str
    n_rows: int
    n_cols: int


class Workspace:
    """Managed directory of named datasets with a checksummed manifest.

    Manifest writes are serialized through an advisory file lock so
    concurrent registrations do not clobber each other.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "datasets").mkdir(exist_ok=True)
        (self.root / "results").mkdir(exist_ok=True)
        self.manifest_path = self.root / "manifest.json"
        self._lock = FileLock(str(self.root / "manifest.lock"))

    def _read_manifest(self) -> dict:
        if not self.manifest_path.exists():
            return {"datasets": {}}
        return json.loads(self.manifest_path.read_text(encoding="utf-8"))

    def _write_manifest(self, manifest: dict) -> None:
        self.manifest_path.write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    def add(self, name: str, source: str | Path) -> WorkspaceEntry:
        """Copy a dataset CSV into the workspace under a unique name."""
        source = Path(source)
        data = read_dataset(source)  # validate before registering
        dest = self.root / "datasets" / f"{name}.csv"
        with self._lock:
            manifest = self._read_manifest()
            if name in manifest["datasets"]:
                raise DataError(f"workspace already has a dataset named {name!r}")
            if source.resolve() != dest.resolve():
                shutil.copyfile(source, dest)
            entry = WorkspaceEntry(
                name=name,
                path=str(dest.relative_to(self.root)),
                sha256=_sha256_file(dest),
                n_rows=data.n,
                n_cols=data.d,
            )
            manifest["datasets"][name] = {
                "path": entry.path,
                "sha256": entry.sha256,
                "n_rows": entry.n_rows,
                "n_cols": entry.n_cols,
            }
            self._write_manifest(manifest)
        return entry

    def list(self) -> list[WorkspaceEntry]:
        manifest = self._read_manifest()
        return [
            WorkspaceEntry(name=name, **info)
            for name, info in sorted(manifest["datasets"].items())
        ]

    def load(self, name: str) -> Dataset | GroupedDataset:
        """Read a registered dataset, verifying its checksum first."""
        manifest = self._read_manifest()
        if name not in manifest["datasets"]:
            raise DataError(f"workspace has no dataset named {name!r}")
        info = manifest["datasets"][name]
        full = self.root / info["path"]
        if not full.exists():
            raise DataError(f"workspace file missing for {name!r}: {full}")
        actual = _sha256_file(full)
        if actual != info["sha256"]:
            raise IntegrityError(
                f"checksum mismatch for {name!r}: manifest {info['sha256'][:12]}..., "
                f"file {actual[:12]}..."
            )
        return read_dataset(full)

    def store_result(self, archive: ResultArchive) -> str:
        """Persist an archive under its content hash; returns the result id."""
        rid = archive_id(archive)
        write_result(archive, self.root / "results" / f"{rid}.json")
        return rid

    def load_result(self, result_id: str) -> ResultArchive:
        path = self.root / "results" / f"{result_id}.json"
        if not path.exists():
            raise DataError(f"no result with id {result_id!r}")
        return read_result(path)
