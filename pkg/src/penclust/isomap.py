"""Isometric feature mapping: k-NN graph -> geodesics -> classical MDS.

The graph is symmetrized by union (k-NN is directed), shortest paths are
computed exactly (desk-scale n), and the embedding comes from the top
eigenpairs of the double-centered squared-geodesic matrix. Coordinates are
determined up to sign and rotation, so downstream checks should compare
distances; a fixed sign convention (largest-magnitude component positive)
keeps repeated runs bit-identical.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, csgraph_from_dense, shortest_path
from scipy.spatial.distance import pdist, squareform

from .dataset import Dataset
from .errors import GraphError, UsageError

_EIG_TOL = 1e-10


@dataclass(eq=False)
class NeighborGraph:
    """Symmetric weighted adjacency; np.inf marks absent edges.

    Exact-duplicate points legitimately produce zero-weight edges, which is
    why absence is inf rather than zero. ``kept`` holds original row indices
    when largest-component mode dropped rows.
    """

    weights: np.ndarray
    k: int
    row_ids: list[str]
    kept: np.ndarray
    dropped_row_ids: list[str] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(eq=False)
class Embedding:
    """n x m coordinates with the positive eigenvalues that scaled them."""

    coords: np.ndarray
    eigenvalues: np.ndarray
    row_ids: list[str]
    n_neighbors: int | None = None
    dropped_row_ids: list[str] = field(default_factory=list)

    @property
    def m(self) -> int:
        return self.coords.shape[1]


def knn_graph(data: Dataset, k: int, largest_component: bool = False) -> NeighborGraph:
    """Connect each point to its k nearest others, union-symmetrized.

    Ties break deterministically toward the lowest row index. A
    disconnected result raises GraphError listing component sizes unless
    ``largest_component`` is set, in which case rows outside the largest
    component are dropped and reported on the returned graph.
    """
    n = data.n
    if not 1 <= k < n:
        raise UsageError(f"need 1 <= k < n, got k={k} with n={n}")
    D = squareform(pdist(data.values))
    W = np.full((n, n), np.inf)
    for i in range(n):
        order = np.argsort(D[i], kind="stable")
        neighbors = order[order != i][:k]
        W[i, neighbors] = D[i, neighbors]
    W = np.minimum(W, W.T)  # union of directed edges; weights are symmetric

    adjacency = csr_matrix(np.isfinite(W))
    n_comp, comp = connected_components(adjacency, directed=False)
    if n_comp > 1:
        sizes = np.bincount(comp)
        if not largest_component:
            raise GraphError(
                f"k-NN graph with k={k} is disconnected; component sizes "
                f"{sorted(sizes.tolist(), reverse=True)}"
            )
        keep_comp = int(np.argmax(sizes))
        kept = np.flatnonzero(comp == keep_comp)
        dropped = [data.row_ids[i] for i in np.flatnonzero(comp != keep_comp)]
        return NeighborGraph(
            weights=W[np.ix_(kept, kept)],
            k=k,
            row_ids=[data.row_ids[i] for i in kept],
            kept=kept,
            dropped_row_ids=dropped,
        )
    return NeighborGraph(
        weights=W, k=k, row_ids=list(data.row_ids), kept=np.arange(n)
    )


def geodesic_distances(graph: NeighborGraph) -> np.ndarray:
    """Exact all-pairs shortest-path distances over the neighbor graph."""
    sparse = csgraph_from_dense(graph.weights, null_value=np.inf)
    D = shortest_path(sparse, method="D", directed=False)
    if not np.all(np.isfinite(D)):
        raise GraphError("graph is disconnected; geodesic distances are infinite")
    np.fill_diagonal(D, 0.0)
    return D


def classical_mds(D: np.ndarray, m: int, row_ids: list[str] | None = None) -> Embedding:
    """Embed a distance matrix by double-centering and eigendecomposition.

    Eigenvalues below 1e-10 * lambda_max count as zero; if fewer than m
    positive eigenvalues remain, m is reduced with a warning.
    """
    D = np.asarray(D, dtype=float)
    n = D.shape[0]
    if m < 1:
        raise UsageError("embedding dimension must be >= 1")
    if m > n - 1:
        raise UsageError(f"embedding dimension {m} exceeds n - 1 = {n - 1}")

    D2 = D ** 2
    row_mean = D2.mean(axis=1, keepdims=True)
    col_mean = D2.mean(axis=0, keepdims=True)
    B = -0.5 * (D2 - row_mean - col_mean + D2.mean())
    B = (B + B.T) / 2.0

    vals, vecs = np.linalg.eigh(B)
    vals, vecs = vals[::-1], vecs[:, ::-1]
    positive = vals > _EIG_TOL * max(vals[0], 0.0)
    n_pos = int(np.count_nonzero(positive))
    if n_pos < m:
        warnings.warn(
            f"only {n_pos} positive eigenvalues; reducing embedding dimension "
            f"from {m} to {n_pos}",
            stacklevel=2,
        )
        m = n_pos
    vals, vecs = vals[:m], vecs[:, :m]

    coords = vecs * np.sqrt(vals)
    for j in range(coords.shape[1]):  # sign convention for reproducibility
        pivot = int(np.argmax(np.abs(coords[:, j])))
        if coords[pivot, j] < 0:
            coords[:, j] = -coords[:, j]

    return Embedding(
        coords=coords,
        eigenvalues=vals,
        row_ids=row_ids if row_ids is not None else [f"r{i:04d}" for i in range(n)],
    )


def isomap(
    data: Dataset, k: int, m: int, largest_component: bool = False
) -> Embedding:
    """Full pipeline: k-NN graph, geodesics, classical MDS."""
    graph = knn_graph(data, k, largest_component=largest_component)
    D = geodesic_distances(graph)
    emb = classical_mds(D, m, row_ids=graph.row_ids)
    emb.n_neighbors = k
    emb.dropped_row_ids = list(graph.dropped_row_ids)
    return emb
