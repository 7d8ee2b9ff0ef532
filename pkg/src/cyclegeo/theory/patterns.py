"""One-point and unconditional pattern probabilities under the mixed point law.

A point ``Z_hat`` is ``(U, U)`` with probability ``p1`` and ``(U, V)``
otherwise, with ``U, V`` independent uniforms. Exact values come from
enumerating the linear orders of the underlying uniforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import NamedTuple

import numpy as np

from ..stats import all_patterns, pattern_rank

MU_EXACT_MAX_R = 5


def _pattern_tuple(pattern) -> tuple[int, ...]:
    if hasattr(pattern, "one_line"):
        pattern = pattern.one_line.tolist()
    p = tuple(int(v) for v in pattern)
    if sorted(p) != list(range(1, len(p) + 1)):
        raise ValueError(f"{p} is not a permutation")
    return p


def all_orders(m: int) -> np.ndarray:
    """All permutations of ``range(m)`` as an ``(m!, m)`` int8 array."""
    out = np.zeros((1, 0), dtype=np.int8)
    for k in range(m):
        blocks = [np.insert(out, pos, k, axis=1) for pos in range(k + 1)]
        out = np.concatenate(blocks, axis=0)
    return out


def pattern_codes(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Lexicographic rank of the pattern of each row of points ``(x[i], y[i])``."""
    order = np.argsort(x, axis=1, kind="stable")
    ys = np.take_along_axis(y, order, axis=1)
    r = ys.shape[1]
    code = np.zeros(ys.shape[0], dtype=np.int64)
    for i in range(r):
        smaller = (ys[:, i + 1:] < ys[:, i:i + 1]).sum(axis=1)
        code += smaller * factorial(r - 1 - i)
    return code


@lru_cache(maxsize=None)
def mu_q_counts(r: int, q: int) -> tuple[int, ...]:
    """Favorable-order counts per pattern when ``q`` of the ``r`` points are diagonal.

    Divide by ``(2r - q)!`` to get probabilities.
    """
    if not 0 <= q <= r:
        raise ValueError("need 0 <= q <= r")
    if r > MU_EXACT_MAX_R:
        raise ValueError(f"exact enumeration limited to r <= {MU_EXACT_MAX_R}")
    off = r - q
    ranks = all_orders(q + 2 * off)
    x = np.concatenate([ranks[:, :q], ranks[:, q:q + off]], axis=1)
    y = np.concatenate([ranks[:, :q], ranks[:, q + off:]], axis=1)
    counts = np.bincount(pattern_codes(x, y), minlength=factorial(r))
    return tuple(int(c) for c in counts)


def _mixture(r: int, p1, terms) -> Fraction:
    p1 = Fraction(p1)
    return sum(comb(r, q) * p1**q * (1 - p1) ** (r - q) * terms(q) for q in range(r + 1))


def mu_pattern_exact(pattern, p1) -> Fraction:
    """``P(perm(Z_hat_1..Z_hat_r) = pattern)`` as a fraction (exact in the binary value of ``p1``)."""
    p = _pattern_tuple(pattern)
    r = len(p)
    if not 0 <= p1 <= 1:
        raise ValueError("p1 must lie in [0, 1]")
    idx = pattern_rank(p)
    return _mixture(r, p1, lambda q: Fraction(mu_q_counts(r, q)[idx], factorial(2 * r - q)))


def mu_pattern(pattern, p1) -> float:
    return float(mu_pattern_exact(pattern, p1))


def mu_vector_exact(r: int, p1) -> list[Fraction]:
    """``mu_pi`` for every pattern of size ``r`` in canonical order."""
    if not 0 <= p1 <= 1:
        raise ValueError("p1 must lie in [0, 1]")
    return [
        _mixture(r, p1, lambda q, i=i: Fraction(mu_q_counts(r, q)[i], factorial(2 * r - q)))
        for i in range(factorial(r))
    ]


def _bernstein(r: int, j: int, w: float) -> float:
    return comb(r - 1, j - 1) * w ** (j - 1) * (1 - w) ** (r - j)


def psi_closed_form(pattern, u: float, v: float) -> float:
    """One-point probability at ``z = (u, v)`` when ``p1 = 0``, as a Bernstein bilinear form."""
    p = _pattern_tuple(pattern)
    r = len(p)
    if not (0 <= u <= 1 and 0 <= v <= 1):
        raise ValueError("(u, v) must lie in the unit square")
    total = sum(_bernstein(r, i, u) * _bernstein(r, p[i - 1], v) for i in range(1, r + 1))
    return total / factorial(r - 1)


class MCEstimate(NamedTuple):
    value: float
    stderr: float
    trials: int


def sample_mixed_points(r: int, p1: float, size: int, rng: np.random.Generator):
    """``size`` rows of ``r`` i.i.d. points from the mixed law; returns ``(x, y)``."""
    diag = rng.random((size, r)) < p1
    x = rng.random((size, r))
    y = rng.random((size, r))
    return x, np.where(diag, x, y)


def _frequency(hits: int, trials: int) -> MCEstimate:
    p = hits / trials
    return MCEstimate(p, float(np.sqrt(p * (1 - p) / trials)), trials)


def psi_monte_carlo(pattern, p1: float, z, trials: int, rng: np.random.Generator,
                    batch: int = 1 << 16) -> MCEstimate:
    """Frequency of ``perm(Z_hat_1..Z_hat_{r-1}, z) = pattern``."""
    p = _pattern_tuple(pattern)
    r = len(p)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    target = pattern_rank(p)
    zx, zy = float(z[0]), float(z[1])
    hits = 0
    done = 0
    while done < trials:
        m = min(batch, trials - done)
        x, y = sample_mixed_points(r - 1, p1, m, rng)
        x = np.concatenate([x, np.full((m, 1), zx)], axis=1)
        y = np.concatenate([y, np.full((m, 1), zy)], axis=1)
        hits += int(np.count_nonzero(pattern_codes(x, y) == target))
        done += m
    return _frequency(hits, trials)


def mu_monte_carlo(pattern, p1: float, trials: int, rng: np.random.Generator,
                   batch: int = 1 << 16) -> MCEstimate:
    p = _pattern_tuple(pattern)
    r = len(p)
    target = pattern_rank(p)
    hits = 0
    done = 0
    while done < trials:
        m = min(batch, trials - done)
        x, y = sample_mixed_points(r, p1, m, rng)
        hits += int(np.count_nonzero(pattern_codes(x, y) == target))
        done += m
    return _frequency(hits, trials)


@dataclass(frozen=True)
class PatternLawContext:
    """Pattern size ``r`` and diagonal weight ``p1`` of the point law."""

    r: int
    p1: float

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if not 0 <= self.p1 <= 1:
            raise ValueError("p1 must lie in [0, 1]")

    @property
    def patterns(self):
        return all_patterns(self.r)

    def sample(self, size: int, rng: np.random.Generator):
        return sample_mixed_points(self.r, self.p1, size, rng)

    def mu(self, pattern) -> float:
        if self.r <= MU_EXACT_MAX_R:
            return mu_pattern(pattern, self.p1)
        raise ValueError(f"exact mu limited to r <= {MU_EXACT_MAX_R}; use mu_monte_carlo")

    def mu_q_weights(self) -> list[float]:
        """Binomial weights of ``q`` diagonal points among ``r``."""
        return [comb(self.r, q) * self.p1**q * (1 - self.p1) ** (self.r - q) for q in range(self.r + 1)]

    def psi_mc(self, pattern, z, trials: int, rng: np.random.Generator) -> MCEstimate:
        return psi_monte_carlo(pattern, self.p1, z, trials, rng)
