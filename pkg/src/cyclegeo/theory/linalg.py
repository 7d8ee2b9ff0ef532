"""Rank computations: one-sided Jacobi singular values and exact rational elimination."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

DEFAULT_RANK_TOL = 1e-9


def singular_values(m, max_sweeps: int = 60) -> np.ndarray:
    """Singular values (descending) by one-sided Jacobi rotations on the columns."""
    a = np.array(m, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if a.shape[0] < a.shape[1]:
        a = a.T.copy()
    n = a.shape[1]
    eps = np.finfo(float).eps
    for _ in range(max_sweeps):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                ci, cj = a[:, i], a[:, j]
                alpha = ci @ ci
                beta = cj @ cj
                gamma = ci @ cj
                if abs(gamma) <= max(eps * np.sqrt(alpha) * np.sqrt(beta), 1e-300):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1 / np.sqrt(1 + t * t)
                s = c * t
                new_i = c * ci - s * cj
                a[:, j] = s * ci + c * cj
                a[:, i] = new_i
        if not rotated:
            break
    return np.sort(np.linalg.norm(a, axis=0))[::-1]


def matrix_rank(m, tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above ``tol`` times the largest one."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = singular_values(m)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def rational_rank(rows) -> int:
    """Exact rank of a matrix of rationals by Gaussian elimination over ``Fraction``."""
    work = [[Fraction(v) for v in row] for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(work)) if work[i][col] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        head = work[rank]
        for i in range(rank + 1, len(work)):
            f = work[i][col]
            if f:
                f /= head[col]
                work[i] = [x - f * h for x, h in zip(work[i], head)]
        rank += 1
    return rank
