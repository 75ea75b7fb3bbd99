"""Hierarchical global/local clustering.

Each sub-domain (group) gets its own local partition, but every local
cluster's mean parameter is one of a shared set of global centroids. The
descent minimizes

    J_h = sum_i ||x_i - mu_{global(local(i))}||^2
          + lam_local * (total local cluster count)
          + lam_global * K_g

by sweeping points within groups: a point may join an existing local cluster
of its group, open a new local cluster bound to an existing global centroid
(paying lam_local), or open a new local cluster bound to a brand-new global
centroid at its own location (paying lam_local + lam_global, capped by
``max_global_clusters``). Global centroids are refreshed at sweep barriers
as the mean of all member points across groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import GroupedDataset
from .dpmeans import Partition, _relabel_first_occurrence
from .errors import DataError, UsageError


@dataclass(frozen=True)
class HierConfig:
    lam_global: float
    lam_local: float
    max_global_clusters: int = 20
    max_iter: int = 100
    tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        for name, val in (("lambda_global", self.lam_global), ("lambda_local", self.lam_local)):
            if not np.isfinite(val) or val < 0:
                raise UsageError(f"{name} must be a finite nonnegative real, got {val}")
        if self.max_global_clusters < 1:
            raise UsageError("max_global_clusters must be >= 1")
        if self.max_iter < 1:
            raise UsageError("max_iter must be >= 1")
        if self.tol < 0:
            raise UsageError("tol must be >= 0")


@dataclass
class LocalCluster:
    """One local cluster: member row positions and its global centroid index."""

    members: list[int]
    global_index: int


@dataclass(eq=False)
class HierPartition:
    """Estimated hierarchical structure.

    ``local`` maps each group name to its local clusters (first-occurrence
    order within the group). ``labels_local[i]`` is the index of row i's
    cluster within its own group's list; ``labels_global[i]`` is the global
    centroid index that cluster is bound to. At convergence every global
    centroid equals the mean of all rows (across groups) mapped to it.
    """

    global_centroids: np.ndarray
    local: dict[str, list[LocalCluster]]
    labels_local: np.ndarray
    labels_global: np.ndarray
    objective: float
    iterations: int = 0
    trace: list[float] = field(default_factory=list)

    def __post_init__(self):
        self.global_centroids = np.atleast_2d(
            np.asarray(self.global_centroids, dtype=float)
        )
        self.labels_local = np.asarray(self.labels_local, dtype=int)
        self.labels_global = np.asarray(self.labels_global, dtype=int)
        k_g = self.global_centroids.shape[0]
        used = set()
        for gname, clusters in self.local.items():
            for c in clusters:
                if not c.members:
                    raise DataError(f"empty local cluster in group {gname!r}")
                if not 0 <= c.global_index < k_g:
                    raise DataError(
                        f"local cluster in group {gname!r} maps to global index "
                        f"{c.global_index}, valid range is [0, {k_g})"
                    )
                used.add(c.global_index)
        if used != set(range(k_g)):
            raise DataError("every global centroid must have at least one mapped local cluster")

    @property
    def k_global(self) -> int:
        return self.global_centroids.shape[0]

    @property
    def n_local_clusters(self) -> int:
        return sum(len(cs) for cs in self.local.values())


class _Cluster:
    __slots__ = ("members", "g")

    def __init__(self, members: set[int], g: int):
        self.members = members
        self.g = g


def _squared_dists(point: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diffs = centroids - point
    return np.einsum("kd,kd->k", diffs, diffs)


def hdp_means(data: GroupedDataset, config: HierConfig) -> HierPartition:
    """Fit local partitions whose cluster means come from one global set.

    Deterministic given row and group order: groups are visited in first-
    occurrence order, points in row order within each group, and ties prefer
    joining an existing local cluster over opening a new one (lowest index
    first). Stops on unchanged structure, relative objective change below
    ``tol``, or ``max_iter`` sweeps.
    """
    if not isinstance(data, GroupedDataset):
        raise DataError("hierarchical clustering needs grouped data (no group labels)")
    X = data.values
    group_rows = data.group_indices()
    lam_l, lam_g = float(config.lam_local), float(config.lam_global)

    globals_arr = X.mean(axis=0, keepdims=True).copy()
    clusters: dict[str, list[_Cluster]] = {
        gname: [_Cluster(set(rows.tolist()), 0)] for gname, rows in group_rows.items()
    }
    point_cluster: dict[int, _Cluster] = {}
    for gname, rows in group_rows.items():
        for i in rows:
            point_cluster[int(i)] = clusters[gname][0]

    prev_sig = None
    prev_obj = None
    trace: list[float] = []
    sweeps = 0

    def current_objective() -> float:
        scatter = 0.0
        n_local = 0
        for cs in clusters.values():
            for c in cs:
                n_local += 1
                rows = np.fromiter(sorted(c.members), dtype=int)
                scatter += float(np.sum((X[rows] - globals_arr[c.g]) ** 2))
        return scatter + lam_l * n_local + lam_g * globals_arr.shape[0]

    for sweeps in range(1, config.max_iter + 1):
        spawned = False
        for gname, rows in group_rows.items():
            group_clusters = clusters[gname]
            for i_np in rows:
                i = int(i_np)
                x = X[i]
                old = point_cluster[i]
                old.members.discard(i)
                if not old.members:
                    group_clusters.remove(old)

                d2_globals = _squared_dists(x, globals_arr)
                best_cost = np.inf
                best = ("new", -1)
                if group_clusters:
                    join_costs = d2_globals[[c.g for c in group_clusters]]
                    cj = int(np.argmin(join_costs))
                    best_cost, best = join_costs[cj], ("join", cj)
                jo = int(np.argmin(d2_globals))
                open_cost = d2_globals[jo] + lam_l
                if open_cost < best_cost:
                    best_cost, best = open_cost, ("open", jo)
                if globals_arr.shape[0] < config.max_global_clusters:
                    new_cost = lam_l + lam_g
                    if new_cost < best_cost:
                        best_cost, best = new_cost, ("new", -1)

                kind, idx = best
                if kind == "join":
                    target = group_clusters[idx]
                    target.members.add(i)
                elif kind == "open":
                    target = _Cluster({i}, idx)
                    group_clusters.append(target)
                else:
                    globals_arr = np.vstack([globals_arr, x])
                    target = _Cluster({i}, globals_arr.shape[0] - 1)
                    group_clusters.append(target)
                    spawned = True
                point_cluster[i] = target

        # Update phase: drop orphaned globals, renumber, refresh centroids.
        used = sorted({c.g for cs in clusters.values() for c in cs})
        remap = {g: new for new, g in enumerate(used)}
        members_of: list[list[int]] = [[] for _ in used]
        for cs in clusters.values():
            for c in cs:
                c.g = remap[c.g]
                members_of[c.g].extend(c.members)
        globals_arr = np.vstack([X[sorted(rows)].mean(axis=0) for rows in members_of])

        obj = current_objective()
        trace.append(obj)

        sig = tuple(
            frozenset((frozenset(c.members), c.g) for c in clusters[gname])
            for gname in group_rows
        )
        if prev_sig is not None and not spawned and sig == prev_sig:
            break
        if prev_obj is not None:
            denom = max(abs(prev_obj), np.finfo(float).tiny)
            if abs(prev_obj - obj) / denom < config.tol:
                break
        prev_sig = sig
        prev_obj = obj

    # Finalize: renumber globals by first occurrence in row order, order each
    # group's clusters by first occurrence within the group.
    n = X.shape[0]
    raw_global = np.array([point_cluster[i].g for i in range(n)], dtype=int)
    labels_global, order = _relabel_first_occurrence(raw_global)
    inv = np.empty(order.size, dtype=int)
    inv[order] = np.arange(order.size)
    globals_arr = globals_arr[order]

    local: dict[str, list[LocalCluster]] = {}
    labels_local = np.empty(n, dtype=int)
    for gname, rows in group_rows.items():
        ordered = sorted(clusters[gname], key=lambda c: min(c.members))
        local[gname] = [
            LocalCluster(members=sorted(c.members), global_index=int(inv[c.g]))
            for c in ordered
        ]
        for pos, c in enumerate(ordered):
            for i in c.members:
                labels_local[i] = pos

    hp = HierPartition(
        global_centroids=globals_arr,
        local=local,
        labels_local=labels_local,
        labels_global=labels_global,
        objective=0.0,
        iterations=sweeps,
        trace=trace,
    )
    hp.objective = hier_objective(data, hp, config)
    return hp


def hier_objective(data: GroupedDataset, hp: HierPartition, config: HierConfig) -> float:
    """Recompute J_h from the stored structure."""
    X = data.values
    k_g = hp.global_centroids.shape[0]
    scatter = 0.0
    n_local = 0
    for gname, cs in hp.local.items():
        for c in cs:
            if not 0 <= c.global_index < k_g:
                raise DataError(
                    f"global index {c.global_index} out of range in group {gname!r}"
                )
            n_local += 1
            rows = np.asarray(c.members, dtype=int)
            scatter += float(np.sum((X[rows] - hp.global_centroids[c.global_index]) ** 2))
    return scatter + config.lam_local * n_local + config.lam_global * k_g


def flatten(hp: HierPartition) -> Partition:
    """Package the global labels and centroids as a single-source Partition.

    Sizes come from global membership. The objective field carries the
    hierarchical J_h unchanged (there is no single-source lambda to re-price
    it under); use it for bookkeeping, not cross-model comparison.
    """
    k = hp.k_global
    sizes = np.bincount(hp.labels_global, minlength=k)
    return Partition(
        labels=hp.labels_global.copy(),
        centroids=hp.global_centroids.copy(),
        k=k,
        objective=hp.objective,
        iterations=hp.iterations,
        sizes=sizes,
        trace=list(hp.trace),
    )
