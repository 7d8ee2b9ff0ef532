"""Permutation statistics: monotone subsequences, RS shape, records, pattern counts.

All functions accept a :class:`~cyclegeo.geometry.Permutation` or any 1-based
one-line sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import comb, factorial, floor, sqrt

import numpy as np

from . import kernels
from .geometry import Permutation, as_zero_based, standardize

PATTERN_ENUMERATION_MAX_N = 200


@dataclass(frozen=True)
class YoungDiagram:
    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if any(r <= 0 for r in rows) or any(a < b for a, b in zip(rows, rows[1:])):
            raise ValueError(f"rows must be positive and weakly decreasing: {rows}")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return sum(self.rows)

    @property
    def columns(self) -> tuple[int, ...]:
        """Column lengths (the conjugate partition)."""
        if not self.rows:
            return ()
        return tuple(sum(1 for r in self.rows if r > j) for j in range(self.rows[0]))

    def column_prefix_sums(self) -> np.ndarray:
        """``out[k]`` = number of boxes in the first ``k`` columns, ``k = 0..rows[0]``."""
        return np.concatenate([[0], np.cumsum(self.columns, dtype=np.int64)])

    def __str__(self):
        return " ".join(map(str, self.rows))


@dataclass(frozen=True)
class RecordCounts:
    high: int
    low: int


def _reverse(a):
    return np.ascontiguousarray(a[::-1])


def lis(perm) -> int:
    return kernels.lis_length(as_zero_based(perm))


def lds(perm) -> int:
    return kernels.lis_length(_reverse(as_zero_based(perm)))


def rs_shape(perm) -> YoungDiagram:
    """Shape of the Schensted row-insertion tableau."""
    return YoungDiagram(tuple(kernels.rs_shape(as_zero_based(perm))))


def lds_k(perm, k, shape: YoungDiagram | None = None) -> int:
    """Largest union of ``floor(k)`` decreasing subsequences (Greene: first ``k`` columns)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    shape = rs_shape(perm) if shape is None else shape
    sums = shape.column_prefix_sums()
    k = int(floor(k))
    return int(sums[min(k, len(sums) - 1)])


def shape_profile(perm, r_grid, shape: YoungDiagram | None = None, scale_n: int | None = None) -> np.ndarray:
    """``LDS_{floor(r sqrt(m))} / m`` for each ``r``; ``m`` is ``scale_n`` or the size of ``perm``.

    ``scale_n`` lets callers rescale by the number of non-fixed points.
    """
    shape = rs_shape(perm) if shape is None else shape
    m = shape.n if scale_n is None else scale_n
    sums = shape.column_prefix_sums()
    out = np.empty(len(r_grid))
    for i, r in enumerate(r_grid):
        if r < 0:
            raise ValueError("r must be non-negative")
        k = int(floor(r * sqrt(m)))
        out[i] = sums[min(k, len(sums) - 1)] / m if m else 0.0
    return out


def records(perm) -> RecordCounts:
    high, low = kernels.records(as_zero_based(perm))
    return RecordCounts(high, low)


def pattern_of_subset(perm, indices) -> Permutation:
    """Pattern induced on the 1-based positions ``indices``."""
    a = as_zero_based(perm)
    idx = np.asarray(sorted(indices), dtype=np.int64)
    if idx.size == 0 or idx.min() < 1 or idx.max() > a.size or np.unique(idx).size != idx.size:
        raise ValueError(f"invalid index set {list(indices)} for n={a.size}")
    return standardize(a[idx - 1])


def all_patterns(r: int) -> list[tuple[int, ...]]:
    """Patterns of size ``r`` in lexicographic one-line order (the canonical order)."""
    return list(permutations(range(1, r + 1)))


def pattern_rank(pattern) -> int:
    """Lexicographic rank of a permutation of ``[r]``."""
    p = list(pattern)
    r = len(p)
    rank = 0
    for i in range(r):
        rank += sum(1 for j in range(i + 1, r) if p[j] < p[i]) * factorial(r - 1 - i)
    return rank


def pattern_counts(perm, r: int, allow_large: bool = False) -> np.ndarray:
    """Counts of all patterns of size ``r`` as an array in canonical order.

    Sizes ``r <= 3`` use Fenwick-tree neighbour counts; larger ``r``
    enumerate all ``r``-subsets, which is refused above ``n = 200`` unless
    ``allow_large`` is set.
    """
    a = as_zero_based(perm)
    n = a.size
    if r < 1 or r > n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    if r == 1:
        return np.array([n], dtype=object)
    if r == 2:
        inv = kernels.count_inversions(a)
        return np.array([comb(n, 2) - inv, inv], dtype=object)
    if r == 3:
        return _pattern_counts_3(a)
    if n > PATTERN_ENUMERATION_MAX_N and not allow_large:
        raise ValueError(f"C({n},{r}) subsets is too many; pass allow_large=True to force")
    return kernels.pattern_counts(a, r).astype(object)


def _pattern_counts_3(a) -> np.ndarray:
    """Size-3 counts from per-element neighbour counts in O(n log n).

    With ``ls, lg`` the numbers of smaller / larger values to the left and
    ``rs, rg`` to the right: 123 and 321 are products through the middle
    element, 132 / 312 follow from pairs to the right of the first element,
    and 231 / 213 from the two-sided products.
    """
    n = a.size
    ls = kernels.left_smaller_counts(a).astype(object)
    pos = np.arange(n, dtype=np.int64).astype(object)
    vals = a.astype(object)
    lg = pos - ls
    rs = vals - ls
    rg = (n - 1 - vals) - lg
    x123 = int((ls * rg).sum())
    x321 = int((lg * rs).sum())
    x132 = int((rg * (rg - 1) // 2).sum()) - x123
    x312 = int((rs * (rs - 1) // 2).sum()) - x321
    x231 = int((ls * rs).sum()) - x132
    x213 = int((lg * rg).sum()) - x312
    return np.array([x123, x132, x213, x231, x312, x321], dtype=object)


def pattern_count(perm, pattern, allow_large: bool = False) -> int:
    """Number of ``r``-subsets of positions inducing ``pattern``."""
    pattern = tuple(pattern.one_line.tolist()) if isinstance(pattern, Permutation) else tuple(pattern)
    r = len(pattern)
    if sorted(pattern) != list(range(1, r + 1)):
        raise ValueError(f"{pattern} is not a permutation")
    n = len(as_zero_based(perm))
    if r > n:
        raise ValueError(f"pattern of size {r} longer than permutation of size {n}")
    return int(pattern_counts(perm, r, allow_large=allow_large)[pattern_rank(pattern)])


def inversions(perm) -> int:
    return kernels.count_inversions(as_zero_based(perm))


def reverse_complement(perm) -> Permutation:
    """``i -> n + 1 - tau(n + 1 - i)``."""
    a = np.asarray(perm.one_line if isinstance(perm, Permutation) else perm, dtype=np.int64)
    return Permutation(a.size + 1 - a[::-1])
