"""Limit law of the centred, rescaled high-record count."""

from __future__ import annotations

from math import exp, isinf

from scipy.integrate import quad
from scipy.stats import norm

GAMMA_TAIL = 80.0


class _AlphaInfinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ALPHA_INFINITY"

    def __reduce__(self):
        return (_AlphaInfinity, ())


ALPHA_INFINITY = _AlphaInfinity()


def normalize_alpha(alpha):
    """Map ``math.inf`` to the sentinel; reject negatives."""
    if alpha is ALPHA_INFINITY:
        return alpha
    alpha = float(alpha)
    if isinf(alpha) and alpha > 0:
        return ALPHA_INFINITY
    if not alpha >= 0:
        raise ValueError(f"alpha must lie in [0, inf], got {alpha}")
    return alpha


def gamma2_cdf(x: float) -> float:
    return 0.0 if x <= 0 else 1 - (1 + x) * exp(-x)


def high_record_limit_cdf(alpha, x: float) -> float:
    """CDF of ``a N + b G`` with ``a = alpha/(alpha+1)``, ``b = 1/(alpha+1)``, ``G ~ Gamma(2, 1)``."""
    alpha = normalize_alpha(alpha)
    if alpha is ALPHA_INFINITY:
        return float(norm.cdf(x))
    if alpha == 0:
        return gamma2_cdf(x)
    a = alpha / (alpha + 1)
    b = 1 / (alpha + 1)

    def integrand(s):
        return s * exp(-s) * norm.cdf((x - b * s) / a)

    kink = x / b
    points = [kink] if 0 < kink < GAMMA_TAIL else None
    value, _ = quad(integrand, 0.0, GAMMA_TAIL, points=points, epsabs=1e-10, epsrel=1e-10, limit=200)
    return min(1.0, max(0.0, value))


def high_record_limit_mean(alpha) -> float:
    alpha = normalize_alpha(alpha)
    if alpha is ALPHA_INFINITY:
        return 0.0
    return 2 / (alpha + 1)

