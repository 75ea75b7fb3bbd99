"""Synthetic planted-partition data.

Cluster means are drawn uniformly in a hypercube scaled so the pairwise
separation constraint is feasible, then rejection-sampled until every pair
of means is at least ``separation * sigma`` apart (``separation`` alone when
sigma is zero), with a 10,000-draw budget. Points are mean + N(0, sigma^2 I),
emitted cluster-major (and group-major for the grouped variant). All draws
come from numpy's PCG64 via ``default_rng(seed)`` in a fixed order: means
first, then noise, so outputs are bit-reproducible for a given seed.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .dataset import Dataset, GroupedDataset
from .errors import GenerationError, UsageError

_PLACEMENT_BUDGET = 10_000


@dataclass(frozen=True)
class GenConfig:
    k_true: int
    n_per_cluster: int | tuple[int, ...]
    d: int
    separation: float
    sigma: float
    seed: int = 0

    def __post_init__(self):
        if self.k_true < 1:
            raise UsageError("k_true must be >= 1")
        if self.d < 1:
            raise UsageError("d must be >= 1")
        if not self.separation > 0:
            raise UsageError("separation must be > 0")
        if self.sigma < 0:
            raise UsageError("sigma must be >= 0")
        counts = self.cluster_counts()
        if len(counts) != self.k_true or any(c < 1 for c in counts):
            raise UsageError("n_per_cluster must be positive (one count per cluster if explicit)")

    def cluster_counts(self) -> tuple[int, ...]:
        if isinstance(self.n_per_cluster, int):
            return (self.n_per_cluster,) * self.k_true
        return tuple(int(c) for c in self.n_per_cluster)


@dataclass(frozen=True)
class GroupedGenConfig(GenConfig):
    """Grouped variant: G groups, each drawing from a subset of the global clusters.

    ``usage`` is one entry per group: either a tuple of int cluster indices
    (the group emits ``n_per_cluster`` points per allowed cluster) or a tuple
    of ``k_true`` float probabilities (the group emits ``n_per_cluster``
    points total, allocated multinomially). None means every group uses every
    cluster.
    """

    groups: int = 1
    usage: tuple[tuple, ...] | None = field(default=None)

    def __post_init__(self):
        super().__post_init__()
        if self.groups < 1:
            raise UsageError("groups must be >= 1")
        if self.usage is not None:
            if len(self.usage) != self.groups:
                raise UsageError("usage needs one entry per group")
            covered: set[int] = set()
            for g, entry in enumerate(self.usage):
                if len(entry) == 0:
                    raise UsageError(f"group {g} has an empty usage set")
                if self._is_subset(entry):
                    idx = set(int(j) for j in entry)
                    if not idx <= set(range(self.k_true)):
                        raise UsageError(f"group {g} usage indices out of range")
                    covered |= idx
                else:
                    probs = np.asarray(entry, dtype=float)
                    if probs.shape != (self.k_true,) or np.any(probs < 0) or probs.sum() <= 0:
                        raise UsageError(
                            f"group {g} probabilities must be {self.k_true} nonnegative reals"
                        )
                    covered |= set(np.flatnonzero(probs).tolist())
            if covered != set(range(self.k_true)):
                raise UsageError("every global cluster must be used by at least one group")

    @staticmethod
    def _is_subset(entry) -> bool:
        return all(isinstance(v, (int, np.integer)) and not isinstance(v, bool) for v in entry)


def _min_separation(config: GenConfig) -> float:
    return config.separation * config.sigma if config.sigma > 0 else config.separation


def _place_means(rng: np.random.Generator, config: GenConfig) -> np.ndarray:
    """Rejection-sample k_true means with pairwise distance >= the separation."""
    sep = _min_separation(config)
    side = sep * max(2.0, 2.0 * config.k_true ** (1.0 / config.d))
    means: list[np.ndarray] = []
    draws = 0
    while len(means) < config.k_true:
        if draws >= _PLACEMENT_BUDGET:
            raise GenerationError(
                f"could not place {config.k_true} means at pairwise distance >= {sep:g} "
                f"within {_PLACEMENT_BUDGET} draws; try a smaller separation"
            )
        candidate = rng.uniform(0.0, side, size=config.d)
        draws += 1
        if all(np.linalg.norm(candidate - m) >= sep for m in means):
            means.append(candidate)
    return np.vstack(means)


def generate_single(config: GenConfig) -> tuple[Dataset, np.ndarray, np.ndarray]:
    """Planted single-source data: (dataset, true_labels, true_means)."""
    rng = np.random.default_rng(config.seed)
    means = _place_means(rng, config)
    counts = config.cluster_counts()
    blocks = []
    labels = []
    for j, count in enumerate(counts):
        noise = rng.standard_normal((count, config.d))
        blocks.append(means[j] + config.sigma * noise)
        labels.extend([j] * count)
    values = np.vstack(blocks)
    data = Dataset(values=values)
    return data, np.asarray(labels, dtype=int), means


def generate_grouped(
    config: GroupedGenConfig,
) -> tuple[GroupedDataset, np.ndarray, np.ndarray, np.ndarray]:
    """Planted grouped data: (dataset, true_local, true_global, true_means).

    ``true_local[i]`` numbers the local cluster within row i's group (first-
    occurrence order, which is ascending global-cluster order here);
    ``true_global[i]`` is the planted global cluster.
    """
    rng = np.random.default_rng(config.seed)
    means = _place_means(rng, config)
    usage = config.usage or tuple(
        tuple(range(config.k_true)) for _ in range(config.groups)
    )
    counts = config.cluster_counts()

    blocks = []
    group_labels: list[str] = []
    true_local: list[int] = []
    true_global: list[int] = []
    for g, entry in enumerate(usage):
        if GroupedGenConfig._is_subset(entry):
            alloc = [(int(j), counts[int(j)]) for j in sorted(set(int(v) for v in entry))]
        else:
            probs = np.asarray(entry, dtype=float)
            probs = probs / probs.sum()
            n_g = counts[0] if isinstance(config.n_per_cluster, int) else sum(counts)
            drawn = rng.multinomial(n_g, probs)
            alloc = [(j, int(c)) for j, c in enumerate(drawn) if c > 0]
        for local_idx, (j, count) in enumerate(alloc):
            noise = rng.standard_normal((count, config.d))
            blocks.append(means[j] + config.sigma * noise)
            group_labels.extend([f"g{g}"] * count)
            true_local.extend([local_idx] * count)
            true_global.extend([j] * count)

    values = np.vstack(blocks)
    data = GroupedDataset(values=values, group=group_labels)
    return (
        data,
        np.asarray(true_local, dtype=int),
        np.asarray(true_global, dtype=int),
        means,
    )


def truth_dict(config: GenConfig, means: np.ndarray, **label_arrays) -> dict:
    """JSON-ready sidecar: config, planted means, and the true label arrays."""
    cfg = asdict(config)
    if "n_per_cluster" in cfg and not isinstance(cfg["n_per_cluster"], int):
        cfg["n_per_cluster"] = list(cfg["n_per_cluster"])
    if cfg.get("usage") is not None:
        cfg["usage"] = [list(entry) for entry in cfg["usage"]]
    out = {"config": cfg, "true_means": means.tolist()}
    for name, arr in label_arrays.items():
        out[name] = np.asarray(arr).tolist()
    return out
