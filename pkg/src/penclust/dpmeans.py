"""Single-source penalized clustering.

Minimizes J = sum_i ||x_i - mu_{z_i}||^2 + lambda * K by coordinate descent:
points are swept in row order, each joining its nearest centroid or spawning
a new cluster at its own location when every squared distance exceeds the
per-cluster penalty (unless the cluster cap is reached). Larger penalties
produce fewer clusters. The descent is deterministic: initialization is a
single cluster at the grand mean and no randomness is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .errors import DataError, UsageError


@dataclass(frozen=True)
class DpConfig:
    """Knobs for the single-source descent.

    ``lam`` is the per-cluster penalty, in squared feature-distance units.
    ``seed`` is carried for API symmetry (CV fold shuffling uses it); the
    descent itself is a single deterministic run.
    """

    lam: float
    max_clusters: int = 20
    max_iter: int = 100
    tol: float = 1e-8
    seed: int = 0
    standardize: bool = False

    def __post_init__(self):
        if not np.isfinite(self.lam) or self.lam < 0:
            raise UsageError(f"lambda must be a finite nonnegative real, got {self.lam}")
        if self.max_clusters < 1:
            raise UsageError(f"max_clusters must be >= 1, got {self.max_clusters}")
        if self.max_iter < 1:
            raise UsageError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.tol < 0:
            raise UsageError(f"tol must be >= 0, got {self.tol}")


@dataclass(eq=False)
class Partition:
    """Clustering result: labels, centroids, and the achieved objective.

    Labels are contiguous 0..k-1 numbered by first occurrence in row order;
    every cluster is non-empty. ``trace`` records the objective after each
    assign+update sweep (in the space the descent ran in), so monotone
    descent can be audited.
    """

    labels: np.ndarray
    centroids: np.ndarray
    k: int
    objective: float
    iterations: int
    sizes: np.ndarray
    trace: list[float] = field(default_factory=list)

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=int)
        self.centroids = np.atleast_2d(np.asarray(self.centroids, dtype=float))
        self.sizes = np.asarray(self.sizes, dtype=int)
        if self.centroids.shape[0] != self.k:
            raise DataError(
                f"k={self.k} but centroids has {self.centroids.shape[0]} rows"
            )
        if self.sizes.shape != (self.k,):
            raise DataError("sizes must have one entry per cluster")
        if np.any(self.sizes < 1):
            raise DataError("every cluster must be non-empty")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.k):
            raise DataError("labels out of range [0, k)")


def _relabel_first_occurrence(labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Renumber labels by first occurrence in row order.

    Returns (new_labels, order) where order[new] = old label.
    """
    _, first = np.unique(labels, return_index=True)
    order = labels[np.sort(first)]
    mapping = np.empty(int(labels.max()) + 1, dtype=int)
    mapping[order] = np.arange(order.size)
    return mapping[labels], order

def _wss(X: np.ndarray, labels: np.ndarray, centroids: np.ndarray) -> float:
    return float(np.sum((X - centroids[labels]) ** 2))


def _standardize(X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-column z-scoring; constant columns pass through unscaled."""
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    scale = np.where(std > 0, std, 1.0)
    return (X - mean) / scale, mean, scale


def dp_means(data: Dataset, config: DpConfig) -> Partition:
    """Estimate the number of clusters and the partition jointly.

    Coordinate descent on J = WSS + lam * K. Each sweep assigns every point
    (in row order) to its nearest centroid, spawning a new cluster at the
    point when all squared distances exceed ``lam`` and the cluster count is
    below ``max_clusters``; centroids are then recomputed as cluster means,
    empty clusters dropped, and labels renumbered by first occurrence.
    Stops on unchanged assignments, relative objective change below ``tol``,
    or ``max_iter`` sweeps.

    With ``standardize=True`` the descent runs on z-scored columns (lam then
    acts in the scaled space); the returned centroids are means of the
    original rows and the reported objective is re-evaluated on the original
    scale so that :func:`objective` reproduces it.

    Returns a :class:`Partition`; deterministic for fixed inputs.
    """
    X_orig = data.values
    X = _standardize(X_orig)[0] if config.standardize else X_orig
    n = X.shape[0]
    lam = float(config.lam)

    centroids = X.mean(axis=0, keepdims=True).copy()
    labels = np.zeros(n, dtype=int)
    prev_labels = None
    prev_obj = None
    trace: list[float] = []
    sweeps = 0

    for sweeps in range(1, config.max_iter + 1):
        spawned = False
        for i in range(n):
            diffs = centroids - X[i]
            dists = np.einsum("kd,kd->k", diffs, diffs)
            j = int(np.argmin(dists))
            if dists[j] > lam and centroids.shape[0] < config.max_clusters:
                centroids = np.vstack([centroids, X[i]])
                labels[i] = centroids.shape[0] - 1
                spawned = True
            else:
                labels[i] = j

        labels, order = _relabel_first_occurrence(labels)
        k = order.size
        centroids = np.empty((k, X.shape[1]))
        for c in range(k):
            centroids[c] = X[labels == c].mean(axis=0)

        obj = _wss(X, labels, centroids) + lam * k
        trace.append(obj)

        if prev_labels is not None and not spawned and np.array_equal(labels, prev_labels):
            break
        if prev_obj is not None:
            denom = max(abs(prev_obj), np.finfo(float).tiny)
            if abs(prev_obj - obj) / denom < config.tol:
                break
        prev_labels = labels.copy()
        prev_obj = obj

    k = centroids.shape[0]
    sizes = np.bincount(labels, minlength=k)
    if config.standardize:
        centroids = np.empty((k, X_orig.shape[1]))
        for c in range(k):
            centroids[c] = X_orig[labels == c].mean(axis=0)
    final_obj = _wss(X_orig, labels, centroids) + lam * k
    return Partition(
        labels=labels,
        centroids=centroids,
        k=k,
        objective=final_obj,
        iterations=sweeps,
        sizes=sizes,
        trace=trace,
    )


def objective(data: Dataset, partition: Partition, lam: float) -> float:
    """Recompute J = within-cluster squared scatter + lam * K for audit."""
    X = data.values
    if partition.centroids.shape[1] != X.shape[1]:
        raise DataError(
            f"centroid dimension {partition.centroids.shape[1]} does not match "
            f"data dimension {X.shape[1]}"
        )
    if partition.labels.shape[0] != X.shape[0]:
        raise DataError("label count does not match row count")
    if partition.labels.max() >= partition.k or partition.labels.min() < 0:
        raise DataError("labels out of range for partition")
    return _wss(X, partition.labels, partition.centroids) + float(lam) * partition.k


def predict(partition: Partition, newdata: Dataset) -> np.ndarray:
    """Label new points by nearest centroid (ties go to the lowest index)."""
    X = newdata.values
    if partition.centroids.shape[1] != X.shape[1]:
        raise DataError(
            f"new data dimension {X.shape[1]} does not match centroid "
            f"dimension {partition.centroids.shape[1]}"
        )
    d2 = ((X[:, None, :] - partition.centroids[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1)
