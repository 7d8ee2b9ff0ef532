"""The VKLS limit curve and the column-mass functional ``F_LSKV``."""

from __future__ import annotations

from math import asin, pi, sqrt

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

QUAD_TOL = 1e-10


def vkls_omega(x: float) -> float:
    """``(2/pi)(x asin(x/2) + sqrt(4 - x^2))`` on ``[-2, 2]``, ``|x|`` outside."""
    x = float(x)
    if abs(x) >= 2:
        return abs(x)
    return 2 / pi * (x * asin(x / 2) + sqrt(4 - x * x))


def _omega_slope(u: float) -> float:
    return 2 / pi * asin(max(-1.0, min(1.0, u / 2)))


def boundary_x(u: float) -> float:
    return (vkls_omega(u) + u) / 2


def boundary_y(u: float) -> float:
    return (vkls_omega(u) - u) / 2


def _u_at_column(r: float) -> float:
    return brentq(lambda u: boundary_x(u) - r, -2.0, 2.0, xtol=1e-15, rtol=1e-15)


def f_lskv(r: float) -> float:
    """Mass of the rescaled limit diagram lying in the columns ``x <= r``.

    Integrates ``y dx`` along the boundary, parametrized by ``u`` in [-2, 2].
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        return 0.0
    if r >= 2:
        return 1.0
    u_end = _u_at_column(r)

    def integrand(u):
        return boundary_y(u) * (_omega_slope(u) + 1) / 2

    value, _ = quad(integrand, -2.0, u_end, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    return value


def f_lskv_grid(grid) -> np.ndarray:
    return np.array([f_lskv(r) for r in grid])
