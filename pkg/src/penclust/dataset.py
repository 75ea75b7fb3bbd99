"""Dataset containers: the units of clustering.

A :class:`Dataset` is an n x d matrix of finite reals with named columns and
row ids. A :class:`GroupedDataset` additionally carries one sub-domain label
per row (e.g. publication year) for the hierarchical clustering path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError


def _as_matrix(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DataError(f"expected a 2-D value matrix, got ndim={arr.ndim}")
    return arr


@dataclass(eq=False)
class Dataset:
    """n x d real matrix plus variable names and row ids.

    Invariants: n >= 1, d >= 1, every entry finite, var_names unique.
    """

    values: np.ndarray
    var_names: list[str] = field(default_factory=list)
    row_ids: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.values = _as_matrix(self.values)
        n, d = self.values.shape
        if n < 1 or d < 1:
            raise DataError(f"dataset must have n >= 1 and d >= 1, got shape {n}x{d}")
        if not np.all(np.isfinite(self.values)):
            bad = np.argwhere(~np.isfinite(self.values))[0]
            raise DataError(f"non-finite value at row {bad[0]}, column {bad[1]}")
        if not self.var_names:
            self.var_names = [f"x{j + 1}" for j in range(d)]
        if len(self.var_names) != d:
            raise DataError(
                f"var_names has {len(self.var_names)} entries for {d} columns"
            )
        if len(set(self.var_names)) != d:
            raise DataError("var_names must be unique")
        if not self.row_ids:
            self.row_ids = [f"r{i:04d}" for i in range(n)]
        if len(self.row_ids) != n:
            raise DataError(f"row_ids has {len(self.row_ids)} entries for {n} rows")
        if len(set(self.row_ids)) != n:
            raise DataError("row_ids must be unique")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


@dataclass(eq=False)
class GroupedDataset(Dataset):
    """Dataset whose rows belong to named sub-domains (groups).

    Every row carries exactly one group label; every group is non-empty by
    construction. ``group_names`` lists groups in order of first occurrence.
    """

    group: list[str] = field(default_factory=list)

    def __post_init__(self):
        super().__post_init__()
        if len(self.group) != self.n:
            raise DataError(
                f"group has {len(self.group)} labels for {self.n} rows"
            )
        self.group = [str(g) for g in self.group]

    @property
    def group_names(self) -> list[str]:
        seen: dict[str, None] = {}
        for g in self.group:
            seen.setdefault(g, None)
        return list(seen)

    @property
    def n_groups(self) -> int:
        return len(self.group_names)

    def group_indices(self) -> dict[str, np.ndarray]:
        """Row indices per group, groups in first-occurrence order."""
        out: dict[str, list[int]] = {}
        for i, g in enumerate(self.group):
            out.setdefault(g, []).append(i)
        return {g: np.asarray(ix, dtype=int) for g, ix in out.items()}
