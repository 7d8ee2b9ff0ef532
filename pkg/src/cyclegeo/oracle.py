"""Brute-force ground truth and goodness-of-fit kernels.

Nothing here calls the compiled kernels or the Schensted code in
:mod:`cyclegeo.stats`; statistics are recomputed from their definitions so
the two routes stay independent.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial

import numpy as np
from scipy.stats import chi2

from .cycle_type import CycleType
from .geometry import Permutation

MAX_ENUM_N = 9
MAX_BRUTE_N = 15
MAX_CHI2_N = 7


@dataclass(frozen=True)
class ExactDistribution:
    """Finite law with exact rational probabilities, sorted by value."""

    support: tuple[tuple[object, Fraction], ...]

    def __post_init__(self):
        if sum(p for _, p in self.support) != 1:
            raise ValueError("probabilities must sum to 1")

    def prob(self, value) -> Fraction:
        return dict(self.support).get(value, Fraction(0))

    def mean(self) -> Fraction:
        return sum(Fraction(v) * p for v, p in self.support)

    def variance(self) -> Fraction:
        m = self.mean()
        return sum((Fraction(v) - m) ** 2 * p for v, p in self.support)

    def cdf(self, x) -> float:
        return float(sum(p for v, p in self.support if v <= x))

    def to_csv(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["value", "prob_num", "prob_den"])
        for v, p in self.support:
            w.writerow([v, p.numerator, p.denominator])


def _cycle_signature(a) -> tuple[int, ...]:
    n = len(a)
    seen = [False] * n
    counts = [0] * n
    for s in range(n):
        if seen[s]:
            continue
        length, i = 0, s
        while not seen[i]:
            seen[i] = True
            i = a[i] - 1
            length += 1
        counts[length - 1] += 1
    while counts and counts[-1] == 0:
        counts.pop()
    return tuple(counts)


@lru_cache(maxsize=64)
def _class_tuples(counts: tuple[int, ...], n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(p for p in permutations(range(1, n + 1)) if _cycle_signature(p) == counts)


def enumerate_class(t: CycleType) -> list[Permutation]:
    """Every permutation of cycle type ``t``, lexicographic in one-line notation."""
    if t.n > MAX_ENUM_N:
        raise ValueError(f"enumeration limited to n <= {MAX_ENUM_N}, got {t.n}")
    return [Permutation(p) for p in _class_tuples(t.counts, t.n)]


def class_tuples(t: CycleType) -> tuple[tuple[int, ...], ...]:
    if t.n > MAX_ENUM_N:
        raise ValueError(f"enumeration limited to n <= {MAX_ENUM_N}, got {t.n}")
    return _class_tuples(t.counts, t.n)


# --- brute-force statistics -----------------------------------------------------


def brute_lis(seq) -> int:
    """Quadratic DP; no patience sorting."""
    seq = list(seq)
    best = [1] * len(seq)
    for i in range(len(seq)):
        for j in range(i):
            if seq[j] < seq[i] and best[j] + 1 > best[i]:
                best[i] = best[j] + 1
    return max(best, default=0)


def brute_lds(seq) -> int:
    return brute_lis([-v for v in seq])


def brute_lds_k(perm, k: int) -> int:
    """Largest subset whose pattern has LIS <= k, i.e. splits into k decreasing runs (Dilworth)."""
    a = list(perm)
    n = len(a)
    if n > MAX_BRUTE_N:
        raise ValueError(f"brute force limited to n <= {MAX_BRUTE_N}")
    if k < 0:
        raise ValueError("k must be non-negative")
    best = 0
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        sub = [a[i] for i in range(n) if mask >> i & 1]
        if brute_lis(sub) <= k:
            best = size
    return best


def brute_lds_k_table(perms: np.ndarray) -> np.ndarray:
    """Vectorised brute force: ``out[i, k]`` is ``LDS_k`` of row ``i`` for ``k = 0..n``.

    For every subset mask of positions, computes the LIS of the subsequence
    by the quadratic DP, then takes the largest subset with LIS <= k.
    """
    perms = np.asarray(perms, dtype=np.int64)
    count, n = perms.shape
    if n > 12:
        raise ValueError("table version limited to n <= 12")
    masks = np.arange(1 << n)
    member = ((masks[None, :] >> np.arange(n)[:, None]) & 1).astype(bool)  # (n, M)
    popcount = member.sum(axis=0)
    out = np.empty((count, n + 1), dtype=np.int64)
    chunk = max(1, (1 << 22) // (1 << n))
    for start in range(0, count, chunk):
        block = perms[start:start + chunk]
        ends = []
        for i in range(n):
            best = np.zeros((block.shape[0], masks.size), dtype=np.int8)
            for j in range(i):
                ok = (block[:, j] < block[:, i])[:, None] & member[j][None, :]
                np.maximum(best, np.where(ok, ends[j], 0), out=best)
            ends.append(np.where(member[i][None, :], best + 1, 0).astype(np.int8))
        lis_of_subset = np.max(np.stack(ends), axis=0) if ends else np.zeros((block.shape[0], 1))
        for k in range(n + 1):
            out[start:start + block.shape[0], k] = np.where(lis_of_subset <= k, popcount[None, :], 0).max(axis=1)
    return out


def brute_records(seq) -> tuple[int, int]:
    seq = list(seq)
    high = sum(1 for i in range(len(seq)) if all(seq[j] < seq[i] for j in range(i)))
    low = sum(1 for i in range(len(seq)) if all(seq[j] > seq[i] for j in range(i)))
    return high, low


def brute_pattern_count(seq, pattern) -> int:
    seq = list(seq)
    pattern = tuple(pattern)
    r = len(pattern)
    total = 0
    for sub in combinations(seq, r):
        ranks = tuple(sorted(sub).index(v) + 1 for v in sub)
        total += ranks == pattern
    return total


def _statistic(name: str):
    if name == "lis":
        return brute_lis
    if name == "lds":
        return brute_lds
    if name == "hrec":
        return lambda s: brute_records(s)[0]
    if name == "lrec":
        return lambda s: brute_records(s)[1]
    if name.startswith("pattern:"):
        pattern = tuple(int(c) for c in name.split(":", 1)[1].replace(",", ""))
        if sorted(pattern) != list(range(1, len(pattern) + 1)):
            raise ValueError(f"bad pattern in statistic {name!r}")
        return lambda s: brute_pattern_count(s, pattern)
    if name.startswith("lds_k:"):
        k = int(name.split(":", 1)[1])
        return lambda s: brute_lds_k(s, k)
    raise ValueError(f"unknown statistic {name!r}")


def exact_statistic_distribution(t: CycleType, statistic: str) -> ExactDistribution:
    """Law of ``statistic`` under the uniform measure on the class of ``t``."""
    f = _statistic(statistic)
    perms = class_tuples(t)
    tally = Counter(f(p) for p in perms)
    total = len(perms)
    return ExactDistribution(tuple((v, Fraction(c, total)) for v, c in sorted(tally.items())))


# --- goodness of fit --------------------------------------------------------------


def _rows(samples) -> list[tuple[int, ...]]:
    if isinstance(samples, np.ndarray):
        return [tuple(row) for row in samples.tolist()]
    return [s.as_tuple() if isinstance(s, Permutation) else tuple(s) for s in samples]


def chi_square_uniformity(samples, t: CycleType, min_expected: float = 5.0) -> float:
    """Pearson p-value of ``samples`` against the uniform law on the class of ``t``.

    A sample outside the class gives p = 0.
    """
    if t.n > MAX_CHI2_N:
        raise ValueError(f"chi-square over full classes limited to n <= {MAX_CHI2_N}")
    cells = class_tuples(t)
    if len(cells) == 1:
        return 1.0
    rows = _rows(samples)
    m = len(rows)
    expected = m / len(cells)
    if expected < min_expected:
        raise ValueError(f"insufficient samples: expected count {expected:.2f} < {min_expected}")
    tally = Counter(rows)
    if sum(tally[c] for c in cells) != m:
        return 0.0
    stat = sum((tally[c] - expected) ** 2 for c in cells) / expected
    return float(chi2.sf(stat, len(cells) - 1))


def two_sample_chi_square(samples_a, samples_b) -> float:
    """p-value of the homogeneity test between two samples of hashable outcomes."""
    ta, tb = Counter(_rows(samples_a)), Counter(_rows(samples_b))
    cells = sorted(set(ta) | set(tb))
    if len(cells) < 2:
        return 1.0
    na, nb = sum(ta.values()), sum(tb.values())
    stat = 0.0
    for c in cells:
        tot = ta[c] + tb[c]
        for obs, size in ((ta[c], na), (tb[c], nb)):
            exp = tot * size / (na + nb)
            stat += (obs - exp) ** 2 / exp
    return float(chi2.sf(stat, len(cells) - 1))


def ks_statistic(samples, cdf) -> float:
    """``sup_x |F_hat(x) - F(x)|`` checking both one-sided limits at every sample value."""
    x = np.sort(np.asarray(samples, dtype=float))
    m = x.size
    if m == 0:
        raise ValueError("ks_statistic needs at least one sample")
    values, counts = np.unique(x, return_counts=True)
    upper = np.cumsum(counts) / m
    lower = upper - counts / m
    f_at = np.array([cdf(v) for v in values])
    f_before = np.array([cdf(np.nextafter(v, -np.inf)) for v in values])
    return float(max(np.max(np.abs(upper - f_at)), np.max(np.abs(lower - f_before))))


def orbit_size(t: CycleType) -> int:
    denom = 1
    for p, c in t.items():
        denom *= p**c * factorial(c)
    return factorial(t.n) // denom
