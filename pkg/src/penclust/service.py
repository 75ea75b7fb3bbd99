"""HTTP/JSON backend for the interactive explorer.

Endpoints live under /api/v1: dataset upload/preview, clustering jobs on a
bounded worker pool, and plot-ready views of stored results (scatter,
parallel coordinates, count bars). Results are content-addressed archives
in the workspace directory, so identical inputs yield identical result ids;
the service adds no nondeterminism of its own. Errors use a uniform
{code, message, details} envelope. Configuration comes from arguments or
the PORT / WORKSPACE_DIR / MAX_UPLOAD_MB / WORKERS environment variables.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .dataset import GroupedDataset
from .dpmeans import DpConfig, dp_means
from .errors import DataError, UsageError, WorkbenchError
from .hdpmeans import HierConfig, flatten, hdp_means
from .io_store import ResultArchive, Workspace, archive_to_dict
from .selection import LambdaGrid, canonical_method, select_lambda

JOB_KINDS = ("cluster", "hcluster", "select")
_TERMINAL = ("done", "failed")


@dataclass
class Job:
    job_id: str
    kind: str
    dataset_id: str
    params: dict
    state: str = "queued"
    progress: float = 0.0
    result_id: str | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "kind": self.kind,
            "dataset_id": self.dataset_id,
            "state": self.state,
            "progress": round(self.progress, 4),
            "result_id": self.result_id,
            "error": self.error,
        }


@dataclass
class JobStore:
    """Thread-safe job registry: monotone progress, immutable terminal states."""

    jobs: dict[str, Job] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def create(self, kind: str, dataset_id: str, params: dict) -> Job:
        job = Job(job_id=uuid.uuid4().hex, kind=kind, dataset_id=dataset_id, params=params)
        with self.lock:
            self.jobs[job.job_id] = job
        return job

    def get(self, job_id: str) -> Job | None:
        with self.lock:
            return self.jobs.get(job_id)

    def set_progress(self, job_id: str, fraction: float) -> None:
        with self.lock:
            job = self.jobs[job_id]
            if job.state not in _TERMINAL:
                job.progress = max(job.progress, min(float(fraction), 1.0))

    def transition(self, job_id: str, state: str, result_id=None, error=None) -> None:
        with self.lock:
            job = self.jobs[job_id]
            if job.state in _TERMINAL:
                return
            job.state = state
            if state == "done":
                job.result_id = result_id
                job.progress = 1.0
            elif state == "failed":
                job.error = error
                job.progress = 1.0


def _err(status: int, message: str, details=None):
    raise HTTPException(status, {"message": message, "details": details})


def _envelope(status: int, message: str, details=None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": status, "message": message, "details": details},
    )


def _parse_grid(spec) -> LambdaGrid:
    if isinstance(spec, dict):
        return LambdaGrid.linear(spec["lo"], spec["hi"], int(spec["steps"]))
    return LambdaGrid(tuple(spec))


def _dp_config(params: dict, lam: float) -> DpConfig:
    return DpConfig(
        lam=lam,
        max_clusters=int(params.get("max_clusters", 20)),
        max_iter=int(params.get("max_iter", 100)),
        tol=float(params.get("tol", 1e-8)),
        seed=int(params.get("seed", 0)),
        standardize=bool(params.get("standardize", False)),
    )


def _validate_params(kind: str, params: dict) -> None:
    """Raise UsageError on malformed job params (mapped to 422)."""
    try:
        if kind == "cluster":
            if "lambda" not in params:
                raise UsageError("cluster jobs require a 'lambda' parameter")
            _dp_config(params, float(params["lambda"]))
        elif kind == "hcluster":
            for key in ("lambda_global", "lambda_local"):
                if key not in params:
                    raise UsageError(f"hcluster jobs require a {key!r} parameter")
            HierConfig(
                lam_global=float(params["lambda_global"]),
                lam_local=float(params["lambda_local"]),
                max_global_clusters=int(params.get("max_global_clusters", 20)),
                seed=int(params.get("seed", 0)),
            )
        else:
            canonical_method(str(params.get("method", "")))
            if "grid" not in params:
                raise UsageError("select jobs require a 'grid' parameter")
            _parse_grid(params["grid"])
            _dp_config(params, 0.0)
    except (TypeError, ValueError, KeyError) as exc:
        raise UsageError(f"malformed job params: {exc}") from exc


def create_app(
    workspace_dir: str | None = None,
    max_upload_mb: int | None = None,
    workers: int | None = None,
    frontend_dir: str | None = None,
) -> FastAPI:
    workspace_dir = workspace_dir or os.environ.get("WORKSPACE_DIR", "workspace")
    max_upload_mb = max_upload_mb or int(os.environ.get("MAX_UPLOAD_MB", "32"))
    workers = workers or int(os.environ.get("WORKERS", str(os.cpu_count() or 2)))

    app = FastAPI(title="penclust service", version="1")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    workspace = Workspace(workspace_dir)
    jobs = JobStore()
    executor = ThreadPoolExecutor(max_workers=workers)

    # result id -> dataset id, persisted so plot views survive restarts
    index_path = workspace.root / "results_index.json"
    index_lock = threading.Lock()
    result_dataset: dict[str, str] = {}
    if index_path.exists():
        result_dataset.update(json.loads(index_path.read_text(encoding="utf-8")))

    def _remember(result_id: str, dataset_id: str) -> None:
        with index_lock:
            result_dataset[result_id] = dataset_id
            index_path.write_text(
                json.dumps(result_dataset, indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )

    app.state.workspace = workspace
    app.state.jobs = jobs

    @app.exception_handler(HTTPException)
    async def http_exc_handler(request: Request, exc: HTTPException):
        if isinstance(exc.detail, dict):
            return _envelope(exc.status_code, exc.detail.get("message", ""), exc.detail.get("details"))
        return _envelope(exc.status_code, str(exc.detail))

    @app.exception_handler(RequestValidationError)
    async def validation_exc_handler(request: Request, exc: RequestValidationError):
        return _envelope(422, "request validation failed", exc.errors())

    @app.exception_handler(WorkbenchError)
    async def workbench_exc_handler(request: Request, exc: WorkbenchError):
        status = 422 if isinstance(exc, UsageError) else 400
        return _envelope(status, str(exc))

    # -- datasets ----------------------------------------------------------

    @app.post("/api/v1/datasets", status_code=201)
    async def upload_dataset(file: UploadFile):
        content = await file.read()
        if len(content) > max_upload_mb * 1024 * 1024:
            _err(413, f"upload exceeds {max_upload_mb} MiB cap")
        dataset_id = hashlib.sha256(content).hexdigest()[:12]
        existing = {e.name for e in workspace.list()}
        if dataset_id not in existing:
            with tempfile.NamedTemporaryFile(suffix=".csv", delete=False) as tmp:
                tmp.write(content)
                tmp_path = tmp.name
            try:
                workspace.add(dataset_id, tmp_path)
            except DataError as exc:
                # ids are content hashes, so a name collision is a concurrent
                # upload of the same bytes and counts as success
                if dataset_id not in {e.name for e in workspace.list()}:
                    _err(400, str(exc).replace(tmp_path, file.filename or "upload"))
            finally:
                os.unlink(tmp_path)
        data = workspace.load(dataset_id)
        return {
            "id": dataset_id,
            "n": data.n,
            "d": data.d,
            "var_names": data.var_names,
            "grouped": isinstance(data, GroupedDataset),
        }

    @app.get("/api/v1/datasets")
    def list_datasets():
        return {
            "datasets": [
                {"id": e.name, "n": e.n_rows, "d": e.n_cols, "sha256": e.sha256}
                for e in workspace.list()
            ]
        }

    def _load_dataset_or_404(dataset_id: str):
        try:
            return workspace.load(dataset_id)
        except DataError:
            _err(404, f"unknown dataset {dataset_id!r}")

    @app.get("/api/v1/datasets/{dataset_id}/preview")
    def preview_dataset(dataset_id: str, rows: int = 10):
        data = _load_dataset_or_404(dataset_id)
        n = min(max(rows, 0), data.n)
        out = {
            "id": dataset_id,
            "n": data.n,
            "d": data.d,
            "var_names": data.var_names,
            "row_ids": data.row_ids[:n],
            "rows": data.values[:n].tolist(),
            "grouped": isinstance(data, GroupedDataset),
        }
        if isinstance(data, GroupedDataset):
            out["group"] = data.group[:n]
            out["group_names"] = data.group_names
        return out

    # -- jobs --------------------------------------------------------------

    def _run_job(job: Job) -> None:
        jobs.transition(job.job_id, "running")
        jobs.set_progress(job.job_id, 0.05)
        try:
            data = workspace.load(job.dataset_id)
            params = job.params
            start = time.monotonic()
            if job.kind == "cluster":
                config = _dp_config(params, float(params["lambda"]))
                partition = dp_means(data, config)
                archive = ResultArchive(kind="cluster", config=config, partition=partition)
            elif job.kind == "hcluster":
                if not isinstance(data, GroupedDataset):
                    raise DataError("hcluster requires a dataset with a group column")
                config = HierConfig(
                    lam_global=float(params["lambda_global"]),
                    lam_local=float(params["lambda_local"]),
                    max_global_clusters=int(params.get("max_global_clusters", 20)),
                    seed=int(params.get("seed", 0)),
                )
                hp = hdp_means(data, config)
                archive = ResultArchive(kind="hcluster", config=config, hier_partition=hp)
            else:
                grid = _parse_grid(params["grid"])
                base = _dp_config(params, 0.0)
                report = select_lambda(
                    data,
                    str(params["method"]),
                    grid,
                    base,
                    folds=int(params.get("folds", 5)),
                    on_progress=lambda f: jobs.set_progress(job.job_id, 0.05 + 0.85 * f),
                )
                config = _dp_config(params, report.chosen_lambda)
                partition = dp_means(data, config)
                archive = ResultArchive(
                    kind="cluster",
                    config=config,
                    partition=partition,
                    selection_report=report,
                )
            archive.timings["fit_seconds"] = round(time.monotonic() - start, 6)
            result_id = workspace.store_result(archive)
            _remember(result_id, job.dataset_id)
            jobs.transition(job.job_id, "done", result_id=result_id)
        except Exception as exc:  # job failures surface via the job state
            jobs.transition(job.job_id, "failed", error=f"{type(exc).__name__}: {exc}")

    @app.post("/api/v1/jobs", status_code=202)
    def submit_job(body: dict):
        kind = body.get("kind")
        if kind not in JOB_KINDS:
            _err(422, f"kind must be one of {JOB_KINDS}", {"got": kind})
        dataset_id = body.get("dataset_id")
        if not dataset_id:
            _err(422, "dataset_id is required")
        _load_dataset_or_404(dataset_id)
        params = body.get("params", {})
        try:
            _validate_params(kind, params)
        except UsageError as exc:
            _err(422, str(exc))
        job = jobs.create(kind, dataset_id, params)
        executor.submit(_run_job, job)
        return {"job_id": job.job_id}

    @app.get("/api/v1/jobs/{job_id}")
    def poll_job(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            _err(404, f"unknown job {job_id!r}")
        return job.to_dict()

    # -- result views ------------------------------------------------------

    def _load_result_or_404(result_id: str):
        try:
            archive = workspace.load_result(result_id)
        except DataError:
            _err(404, f"unknown result {result_id!r}")
        dataset_id = result_dataset.get(result_id)
        data = workspace.load(dataset_id) if dataset_id else None
        return archive, data

    def _result_labels(archive: ResultArchive) -> np.ndarray:
        if archive.hier_partition is not None:
            return flatten(archive.hier_partition).labels
        return archive.partition.labels

    @app.get("/api/v1/results/{result_id}")
    def get_result(result_id: str):
        archive, _ = _load_result_or_404(result_id)
        return archive_to_dict(archive)

    def _select_vars(data, vars: str | None):
        if not vars:
            return list(range(data.d)), data.var_names
        names = [v for v in vars.split(",") if v]
        bad = [v for v in names if v not in data.var_names]
        if bad:
            _err(422, f"unknown variables {bad}", {"valid": data.var_names})
        idx = [data.var_names.index(v) for v in names]
        return idx, names

    @app.get("/api/v1/results/{result_id}/scatter")
    def scatter_view(result_id: str, vars: str | None = None):
        archive, data = _load_result_or_404(result_id)
        if data is None:
            _err(404, "dataset for this result is no longer registered")
        idx, names = _select_vars(data, vars)
        labels = _result_labels(archive)
        out = {
            "vars": names,
            "row_ids": data.row_ids,
            "values": data.values[:, idx].tolist(),
            "cluster": labels.tolist(),
        }
        if isinstance(data, GroupedDataset):
            out["group"] = data.group
        return out

    @app.get("/api/v1/results/{result_id}/parallel")
    def parallel_view(result_id: str, vars: str | None = None, highlight: int | None = None):
        archive, data = _load_result_or_404(result_id)
        if data is None:
            _err(404, "dataset for this result is no longer registered")
        idx, names = _select_vars(data, vars)
        labels = _result_labels(archive)
        k = int(labels.max()) + 1
        if highlight is not None and not 0 <= highlight < k:
            _err(422, f"highlight cluster {highlight} out of range", {"valid": list(range(k))})
        lines = [
            {
                "row_id": data.row_ids[i],
                "values": data.values[i, idx].tolist(),
                "cluster": int(labels[i]),
                "dimmed": highlight is not None and int(labels[i]) != highlight,
            }
            for i in range(data.n)
        ]
        return {"vars": names, "lines": lines}

    @app.get("/api/v1/results/{result_id}/counts")
    def counts_view(result_id: str, by: str = "cluster"):
        if by not in ("cluster", "group", "cluster_x_group"):
            _err(422, "by must be one of cluster, group, cluster_x_group", {"got": by})
        archive, data = _load_result_or_404(result_id)
        labels = _result_labels(archive)
        k = int(labels.max()) + 1
        if by == "cluster":
            counts = np.bincount(labels, minlength=k)
            return {"by": "cluster", "labels": list(range(k)), "counts": counts.tolist()}
        if archive.hier_partition is None:
            _err(409, f"counts by {by!r} requires a hierarchical result")
        if data is None or not isinstance(data, GroupedDataset):
            _err(404, "grouped dataset for this result is no longer registered")
        names = data.group_names
        gidx = {g: i for i, g in enumerate(names)}
        if by == "group":
            counts = [0] * len(names)
            for g in data.group:
                counts[gidx[g]] += 1
            return {"by": "group", "labels": names, "counts": counts}
        table = np.zeros((len(names), k), dtype=int)
        for i, g in enumerate(data.group):
            table[gidx[g], int(labels[i])] += 1
        return {
            "by": "cluster_x_group",
            "groups": names,
            "clusters": list(range(k)),
            "table": table.tolist(),
        }

    frontend = frontend_dir or os.environ.get("FRONTEND_DIR")
    if frontend and Path(frontend).is_dir():
        app.mount("/", StaticFiles(directory=frontend, html=True), name="frontend")

    return app
