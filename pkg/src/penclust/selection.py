"""Choosing the per-cluster penalty lambda.

Three selectors over a lambda grid: V-fold cross-validation (minimized),
the silhouette statistic, and the Calinski-Harabasz statistic (both
maximized). Degenerate partitions yield an "undefined" score (None) rather
than an exception so grids may contain degenerate penalties; a zero
within-scatter CH is reported as +inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .dataset import Dataset
from .dpmeans import DpConfig, dp_means
from .errors import DataError, UsageError

METHODS = ("cv", "silhouette", "calinski_harabasz")

_ALIASES = {"sil": "silhouette", "ch": "calinski_harabasz", "calinski-harabasz": "calinski_harabasz"}


def canonical_method(name: str) -> str:
    method = _ALIASES.get(name, name)
    if method not in METHODS:
        raise UsageError(f"unknown selection method {name!r}; expected one of {METHODS}")
    return method


@dataclass(frozen=True)
class LambdaGrid:
    """Strictly ascending, finite, nonnegative penalty values."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 1:
            raise UsageError("lambda grid must contain at least one value")
        if not all(math.isfinite(v) and v >= 0 for v in vals):
            raise UsageError("lambda grid values must be finite and nonnegative")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise UsageError("lambda grid must be strictly ascending")

    @staticmethod
    def linear(lo: float, hi: float, steps: int) -> "LambdaGrid":
        """Inclusive linear grid, the CLI's lo:hi:steps syntax."""
        if steps < 1:
            raise UsageError("grid needs at least one step")
        if steps == 1:
            return LambdaGrid((lo,))
        return LambdaGrid(tuple(np.linspace(lo, hi, steps)))


@dataclass(eq=False)
class SelectionReport:
    method: str
    grid: LambdaGrid
    scores: list[float | None]
    k_per_lambda: list[int]
    chosen_lambda: float
    chosen_k: int
    seed: int
    folds: int | None = None

    def __post_init__(self):
        if self.chosen_lambda not in self.grid.values:
            raise UsageError("chosen_lambda must be one of the grid values")


def silhouette_score(data: Dataset, labels) -> float | None:
    """Mean silhouette (b - a) / max(a, b), Euclidean distance.

    Singleton clusters contribute s(i) = 0. Returns None when fewer than two
    clusters are present (the score is undefined there).
    """
    X = data.values
    labels = np.asarray(labels)
    if labels.shape[0] != X.shape[0]:
        raise DataError("labels length does not match row count")
    uniq, inv = np.unique(labels, return_inverse=True)
    k = uniq.size
    if k < 2:
        return None

    D = squareform(pdist(X))
    masks = [inv == c for c in range(k)]
    counts = np.array([m.sum() for m in masks])
    s = np.zeros(X.shape[0])
    for c in range(k):
        idx = np.flatnonzero(masks[c])
        if counts[c] == 1:
            continue  # singleton convention: s(i) = 0
        a = D[np.ix_(idx, idx)].sum(axis=1) / (counts[c] - 1)
        b = np.full(idx.size, np.inf)
        for other in range(k):
            if other == c:
                continue
            b = np.minimum(b, D[np.ix_(idx, masks[other])].mean(axis=1))
        denom = np.maximum(a, b)
        with np.errstate(invalid="ignore"):
            si = np.where(denom > 0, (b - a) / denom, 0.0)
        s[idx] = si
    return float(s.mean())


def calinski_harabasz(data: Dataset, labels) -> float | None:
    """CH = (B / (K-1)) / (W / (n-K)); +inf when W is exactly zero.

    Returns None when K < 2 or K > n - 1 (undefined).
    """
    X = data.values
    labels = np.asarray(labels)
    if labels.shape[0] != X.shape[0]:
        raise DataError("labels length does not match row count")
    uniq, inv = np.unique(labels, return_inverse=True)
    n, k = X.shape[0], uniq.size
    if k < 2 or k > n - 1:
        return None

    grand = X.mean(axis=0)
    between = 0.0
    within = 0.0
    for c in range(k):
        pts = X[inv == c]
        center = pts.mean(axis=0)
        between += pts.shape[0] * float(np.sum((center - grand) ** 2))
        within += float(np.sum((pts - center) ** 2))
    if within == 0.0:
        return math.inf
    return (between / (k - 1)) / (within / (n - k))


def cv_heldout_loss(data: Dataset, lam: float, folds: int, config: DpConfig) -> float:
    """Mean capped held-out cost under V-fold cross-validation.

    Folds come from a seeded shuffle (``config.seed``). The model is fit on
    the training folds; each held-out point pays min(min_k ||x - mu_k||^2,
    lam): it either joins its nearest cluster or would pay the spawn
    penalty. The mean is over all held-out points, so the loss never
    exceeds lam.
    """
    if folds < 2:
        raise UsageError(f"folds must be >= 2, got {folds}")
    n = data.n
    if n < folds:
        raise DataError(f"need at least as many rows ({n}) as folds ({folds})")

    rng = np.random.default_rng(config.seed)
    perm = rng.permutation(n)
    total = 0.0
    for part_idx in np.array_split(perm, folds):
        train_idx = np.sort(np.setdiff1d(perm, part_idx))
        train = Dataset(
            values=data.values[train_idx],
            var_names=list(data.var_names),
            row_ids=[data.row_ids[i] for i in train_idx],
        )
        fitted = dp_means(train, replace(config, lam=lam))
        held = data.values[np.sort(part_idx)]
        d2 = ((held[:, None, :] - fitted.centroids[None, :, :]) ** 2).sum(axis=2)
        total += float(np.minimum(d2.min(axis=1), lam).sum())
    return total / n


def select_lambda(
    data: Dataset,
    method: str,
    grid: LambdaGrid,
    config: DpConfig,
    folds: int = 5,
    on_progress=None,
) -> SelectionReport:
    """Fit at every grid value and pick the best-scoring lambda.

    Silhouette and CH are maximized, CV loss is minimized. Exact score ties
    prefer the largest lambda (parsimony). If every score is undefined the
    largest lambda is chosen and the scores stay undefined in the report.
    ``on_progress``, if given, is called with the completed fraction after
    each grid value.
    """
    method = canonical_method(method)
    scores: list[float | None] = []
    ks: list[int] = []
    for pos, lam in enumerate(grid.values):
        part = dp_means(data, replace(config, lam=lam))
        ks.append(part.k)
        if method == "silhouette":
            scores.append(silhouette_score(data, part.labels))
        elif method == "calinski_harabasz":
            scores.append(calinski_harabasz(data, part.labels))
        else:
            scores.append(cv_heldout_loss(data, lam, folds, config))
        if on_progress is not None:
            on_progress((pos + 1) / len(grid.values))

    best_idx = None
    for idx, score in enumerate(scores):
        if score is None:
            continue
        if best_idx is None:
            best_idx = idx
            continue
        incumbent = scores[best_idx]
        if method == "cv":
            if score <= incumbent:
                best_idx = idx
        elif score >= incumbent:
            best_idx = idx
    if best_idx is None:
        best_idx = len(grid.values) - 1  # all undefined: fall back to largest lambda

    return SelectionReport(
        method=method,
        grid=grid,
        scores=scores,
        k_per_lambda=ks,
        chosen_lambda=grid.values[best_idx],
        chosen_k=ks[best_idx],
        seed=config.seed,
        folds=folds if method == "cv" else None,
    )
