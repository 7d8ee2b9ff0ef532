"""Normal-approximation and large-deviation bounds for pattern counts."""

from __future__ import annotations

from math import exp, factorial


def stein_bound(n: int, r: int, variance: float) -> float:
    """Kolmogorov-distance bound for the standardized count of a size-``r`` pattern."""
    if variance <= 0:
        raise ValueError("variance must be positive")
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    f = factorial(r - 1)
    return (42 * r / f**2 * n ** (2 * r - 1.5) / variance
            + 72 * r / f**3 * n ** (3 * r - 2) / variance**1.5)


def janson_ld_bound(n: int, r: int, t: float) -> float:
    """Bound on ``P(|X_pi - E X_pi| >= t)``."""
    if t <= 0:
        raise ValueError("t must be positive")
    return 2 * exp(-2 * factorial(r - 1) / 3 * t * t / n ** (2 * r - 1))
