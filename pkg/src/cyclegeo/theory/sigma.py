"""Limiting covariance matrices of normalized pattern counts.

Two exact routes are provided. ``sigma_matrix_p2`` covers ``p1 = 0`` through
integer Bernstein integrals. ``sigma_matrix_general`` handles any ``p1``: the
one-point function is piecewise polynomial, and its pieces are read off by
enumerating the linear orders of the other points' coordinates around the
anchor point. A paired Monte Carlo estimator covers larger ``r``.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import comb, factorial, gcd, lcm

import numpy as np

from ..stats import all_patterns
from .patterns import all_orders, pattern_codes, sample_mixed_points

SIGMA_P2_MAX_R = 6
SIGMA_EXACT_MAX_R = 3


@dataclass(frozen=True, eq=False)
class SigmaMatrix:
    """``r! x r!`` covariance matrix indexed by patterns in lexicographic order.

    Exact matrices keep integer numerators over a common denominator;
    Monte Carlo matrices carry per-entry standard errors instead.
    """

    r: int
    p1: float
    p2: float
    entries: np.ndarray
    numerators: np.ndarray | None = None
    denominator: int | None = None
    stderr: np.ndarray | None = None

    @property
    def patterns(self) -> list[tuple[int, ...]]:
        return all_patterns(self.r)

    @property
    def is_exact(self) -> bool:
        return self.numerators is not None

    def exact(self, i: int, j: int) -> Fraction:
        if not self.is_exact:
            raise ValueError("matrix was estimated, not computed exactly")
        return Fraction(int(self.numerators[i, j]), self.denominator)

    def exact_rows(self) -> list[list[Fraction]]:
        m = self.entries.shape[0]
        return [[self.exact(i, j) for j in range(m)] for i in range(m)]

    def row_sums(self) -> np.ndarray:
        if self.is_exact:
            return np.array([float(Fraction(int(s), self.denominator)) for s in self.numerators.sum(axis=1)])
        return self.entries.sum(axis=1)

    def entry(self, pi, rho) -> float:
        idx = {p: i for i, p in enumerate(self.patterns)}
        return float(self.entries[idx[tuple(pi)], idx[tuple(rho)]])

    def to_csv(self, fh):
        labels = ["".join(map(str, p)) for p in self.patterns]
        fh.write(f"# r={self.r} p1={self.p1!r} p2={self.p2!r}; rows/columns: patterns in lexicographic one-line order\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["pattern"] + labels)
        for label, row in zip(labels, self.entries):
            w.writerow([label] + [f"{v:.17g}" for v in row])


def _from_fractions(r, p1, p2, rows) -> SigmaMatrix:
    den = reduce(lcm, (f.denominator for row in rows for f in row), 1)
    num = np.array([[f.numerator * (den // f.denominator) for f in row] for row in rows], dtype=object)
    entries = np.array([[float(f) for f in row] for row in rows])
    return SigmaMatrix(r, float(p1), float(p2), entries, num, den)


def _check_unit(name, value):
    if not 0 <= value <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


# --- p1 = 0 via Bernstein integrals --------------------------------------------------


def bernstein_gram(r: int) -> tuple[np.ndarray, int]:
    """``G[i, k] = int_0^1 g_i g_k`` as integer numerators over ``(2r - 1)!``."""
    den = factorial(2 * r - 1)
    g = np.empty((r, r), dtype=np.int64)
    for i in range(1, r + 1):
        for k in range(1, r + 1):
            g[i - 1, k - 1] = comb(r - 1, i - 1) * comb(r - 1, k - 1) * factorial(i + k - 2) * factorial(2 * r - i - k)
    return g, den


@lru_cache(maxsize=None)
def _p2_blocks(r: int):
    """Integer matrices ``S, W`` with ``E[psi psi]`` equal to ``S / (D (r-1)!)^2`` (same orientation)."""
    g, _ = bernstein_gram(r)
    perms = np.array(all_patterns(r), dtype=np.int64) - 1
    a = g[perms]  # a[p, i, b] = G[pi(i), b]
    b = np.einsum("ij,pib->pjb", g, a)  # b[p, j, c] = sum_i G[i, j] G[pi(i), c]
    cols = np.arange(r)
    same = b[:, cols[None, :], perms].sum(axis=2)  # sum_j b[p, j, rho(j)]
    swap = b[:, perms, cols[None, :]].sum(axis=2)  # sum_j b[p, rho(j), j]
    return same, swap


def sigma_matrix_p2(r: int, p2) -> SigmaMatrix:
    """Exact ``Sigma^{p2}`` (no fixed points) for ``r <= 6``."""
    if not 1 <= r <= SIGMA_P2_MAX_R:
        raise ValueError(f"exact Bernstein path limited to 1 <= r <= {SIGMA_P2_MAX_R}")
    _check_unit("p2", p2)
    p2f = Fraction(p2)
    same, swap = _p2_blocks(r)
    d = factorial(2 * r - 1)
    f1 = factorial(r - 1)
    base = d * d * f1 * f1  # E[psi_pi psi_rho] = M / base
    mean_sq_num = base // (factorial(r) ** 2) if base % factorial(r) ** 2 == 0 else None
    if mean_sq_num is None:
        raise ArithmeticError("unexpected non-integral mean term")
    # cov = (M - base / r!^2) / base; Sigma = (cov_same + p2 cov_swap) / (r-1)!^2
    cov_same = same.astype(object) - mean_sq_num
    cov_swap = swap.astype(object) - mean_sq_num
    num = cov_same * p2f.denominator + cov_swap * p2f.numerator
    den = base * f1 * f1 * p2f.denominator
    g = reduce(gcd, (int(v) for v in num.flat), den)
    num = np.array([[int(v) // g for v in row] for row in num], dtype=object)
    den //= g
    entries = np.array([[v / den for v in row] for row in num.tolist()], dtype=float)
    return SigmaMatrix(r, 0.0, float(p2), entries, num, den)


# --- general p1 via order enumeration ------------------------------------------------

_Poly = dict  # (a, b, c) -> Fraction; monomial lo^a mid^b hi^c


@lru_cache(maxsize=None)
def _psi_pieces(r: int, q: int, region: str):
    """Polynomial pieces of the one-point function with ``q`` diagonal other points.

    ``region`` is ``"D"`` (anchor on the diagonal, ``u^a (1-u)^c``), ``"L"``
    (anchor ``x < y``) or ``"R"`` (anchor ``x > y``); for the last two the
    monomials are in the gaps ``lo, mid, hi`` cut out by the two coordinates.
    Returns a tuple indexed by pattern code.
    """
    off = r - 1 - q
    m = q + 2 * off
    anchors = 1 if region == "D" else 2
    ranks = all_orders(m + anchors).astype(np.int64)
    if anchors == 2:
        ranks = ranks[ranks[:, m] < ranks[:, m + 1]]
    lo_anchor = ranks[:, m]
    hi_anchor = ranks[:, m] if anchors == 1 else ranks[:, m + 1]
    zx, zy = {"D": (lo_anchor, lo_anchor), "L": (lo_anchor, hi_anchor), "R": (hi_anchor, lo_anchor)}[region]
    diag = ranks[:, :q]
    x = np.concatenate([diag, ranks[:, q:q + off], zx[:, None]], axis=1)
    y = np.concatenate([diag, ranks[:, q + off:m], zy[:, None]], axis=1)
    codes = pattern_codes(x, y)
    others = ranks[:, :m]
    a = (others < lo_anchor[:, None]).sum(axis=1)
    b = ((others > lo_anchor[:, None]) & (others < hi_anchor[:, None])).sum(axis=1)
    c = m - a - b
    key = (codes * (m + 1) + a) * (m + 1) + b
    uniq, counts = np.unique(key, return_counts=True)
    pieces = [defaultdict(Fraction) for _ in range(factorial(r))]
    for k, cnt in zip(uniq.tolist(), counts.tolist()):
        bb = k % (m + 1)
        aa = (k // (m + 1)) % (m + 1)
        code = k // (m + 1) ** 2
        cc = m - aa - bb
        pieces[code][(aa, bb, cc)] += Fraction(cnt, factorial(aa) * factorial(bb) * factorial(cc))
    return tuple(dict(p) for p in pieces)


def psi_pieces(r: int, p1, region: str) -> list[_Poly]:
    """Pieces of ``psi^{p1}_pi`` on ``region`` for every pattern, mixing over ``q``."""
    p1 = Fraction(p1)
    out = [defaultdict(Fraction) for _ in range(factorial(r))]
    for q in range(r):
        w = comb(r - 1, q) * p1**q * (1 - p1) ** (r - 1 - q)
        if w == 0:
            continue
        for code, poly in enumerate(_psi_pieces(r, q, region)):
            for mono, coef in poly.items():
                out[code][mono] += w * coef
    return [dict(p) for p in out]


def psi_exact(pattern, p1, u: float, v: float) -> float:
    """Evaluate ``psi^{p1}_pi(u, v)`` from the enumerated pieces (``r <= 4``)."""
    from ..stats import pattern_rank

    r = len(pattern)
    code = pattern_rank(pattern)
    if u == v:
        poly = psi_pieces(r, p1, "D")[code]
        return float(sum(f * u**a * (1 - u) ** c for (a, _, c), f in poly.items()))
    region = "L" if u < v else "R"
    lo, hi = min(u, v), max(u, v)
    poly = psi_pieces(r, p1, region)[code]
    return float(sum(f * lo**a * (hi - lo) ** b * (1 - hi) ** c for (a, b, c), f in poly.items()))


def _beta(a: int, c: int) -> Fraction:
    return Fraction(factorial(a) * factorial(c), factorial(a + c + 1))


def _dirichlet(a: int, b: int, c: int) -> Fraction:
    """Integral of ``lo^a mid^b hi^c`` over one triangle ``{x < y}`` of the unit square."""
    return Fraction(factorial(a) * factorial(b) * factorial(c), factorial(a + b + c + 2))


def _integral(poly: _Poly, measure) -> Fraction:
    return sum((f * measure(*mono) for mono, f in poly.items()), Fraction(0))


def _product_integral(f: _Poly, g: _Poly, measure) -> Fraction:
    total = Fraction(0)
    for (a1, b1, c1), x in f.items():
        for (a2, b2, c2), y in g.items():
            total += x * y * measure(a1 + a2, b1 + b2, c1 + c2)
    return total


def _diag_measure(a, b, c):
    return _beta(a, c)


def _marginal_first(pl: _Poly, pr: _Poly) -> _Poly:
    """``v -> int psi(u, v) du`` in the basis ``v^i (1-v)^j`` (stored as ``(i, 0, j)``)."""
    out = defaultdict(Fraction)
    for (a, b, c), f in pl.items():  # u < v: lo=u, mid=v-u, hi=1-v
        out[(a + b + 1, 0, c)] += f * _beta(a, b)
    for (a, b, c), f in pr.items():  # u > v: lo=v, mid=u-v, hi=1-u
        out[(a, 0, b + c + 1)] += f * _beta(b, c)
    return dict(out)


def _marginal_second(pl: _Poly, pr: _Poly) -> _Poly:
    """``v -> int psi(v, w) dw`` in the same basis."""
    out = defaultdict(Fraction)
    for (a, b, c), f in pl.items():  # v < w: lo=v, mid=w-v, hi=1-w
        out[(a, 0, b + c + 1)] += f * _beta(b, c)
    for (a, b, c), f in pr.items():  # v > w: lo=w, mid=v-w, hi=1-v
        out[(a + b + 1, 0, c)] += f * _beta(a, b)
    return dict(out)


def covariance_blocks(r: int, p1) -> dict[str, list[list[Fraction]]]:
    """The four covariance blocks ``UU``, ``UV``, ``swap`` and ``W`` as exact fractions."""
    if r > SIGMA_EXACT_MAX_R:
        raise ValueError(f"exact enumeration limited to r <= {SIGMA_EXACT_MAX_R}")
    d = psi_pieces(r, p1, "D")
    lft = psi_pieces(r, p1, "L")
    rgt = psi_pieces(r, p1, "R")
    k = len(d)
    mean_diag = [_integral(p, _diag_measure) for p in d]
    mean_sq = [_integral(lft[i], _dirichlet) + _integral(rgt[i], _dirichlet) for i in range(k)]
    first = [_marginal_first(lft[i], rgt[i]) for i in range(k)]
    second = [_marginal_second(lft[i], rgt[i]) for i in range(k)]
    blocks = {name: [[Fraction(0)] * k for _ in range(k)] for name in ("UU", "UV", "swap", "W")}
    for i in range(k):
        for j in range(k):
            blocks["UU"][i][j] = _product_integral(d[i], d[j], _diag_measure) - mean_diag[i] * mean_diag[j]
            blocks["UV"][i][j] = (_product_integral(lft[i], lft[j], _dirichlet)
                                  + _product_integral(rgt[i], rgt[j], _dirichlet) - mean_sq[i] * mean_sq[j])
            blocks["swap"][i][j] = (_product_integral(lft[i], rgt[j], _dirichlet)
                                    + _product_integral(rgt[i], lft[j], _dirichlet) - mean_sq[i] * mean_sq[j])
            blocks["W"][i][j] = _product_integral(first[i], second[j], _diag_measure) - mean_sq[i] * mean_sq[j]
    return blocks


def _block_weights(r, p1, p2):
    return {"UU": p1, "UV": 1 - p1, "swap": p2, "W": 2 * (1 - p1 - p2)}


def _symmetrize_w(w):
    k = len(w)
    return [[(w[i][j] + w[j][i]) / 2 for j in range(k)] for i in range(k)]


def sigma_matrix_general(r: int, p1, p2, method: str = "exact", trials: int = 200_000,
                         rng: np.random.Generator | None = None) -> SigmaMatrix:
    """``Sigma^{p1, p2}`` from the four covariance blocks.

    The cross block ``cov(psi_pi(U,V), psi_rho(V,W))`` enters symmetrized,
    since the pair of index sets sharing one point contributes both orders.
    """
    _check_unit("p1", p1)
    _check_unit("p2", p2)
    if method == "exact":
        p1f, p2f = Fraction(p1), Fraction(p2)
        blocks = covariance_blocks(r, p1f)
        blocks["W"] = _symmetrize_w(blocks["W"])
        weights = _block_weights(r, p1f, p2f)
        scale = Fraction(1, factorial(r - 1) ** 2)
        k = factorial(r)
        rows = [[scale * sum(weights[b] * blocks[b][i][j] for b in blocks) for j in range(k)] for i in range(k)]
        return _from_fractions(r, p1, p2, rows)
    if method == "mc":
        if rng is None:
            raise ValueError("Monte Carlo mode needs an rng")
        return _sigma_monte_carlo(r, float(p1), float(p2), trials, rng)
    raise ValueError(f"unknown method {method!r}")


# --- paired Monte Carlo ----------------------------------------------------------------


def _codes_with_anchor(r, p1, zx, zy, rng):
    m = zx.size
    x, y = sample_mixed_points(r - 1, p1, m, rng)
    x = np.concatenate([x, zx[:, None]], axis=1)
    y = np.concatenate([y, zy[:, None]], axis=1)
    return pattern_codes(x, y)


def _paired_block(r, p1, block, trials, rng, batch=1 << 15):
    """Covariance estimate and its delta-method standard error for one block.

    Both factors share the anchor coordinates and use independent companion
    points, so every estimated row sums to zero exactly.
    """
    k = factorial(r)
    joint = np.zeros(k * k)
    done = 0
    while done < trials:
        m = min(batch, trials - done)
        u, v, w = rng.random(m), rng.random(m), rng.random(m)
        z1, z2 = {
            "UU": ((u, u), (u, u)),
            "UV": ((u, v), (u, v)),
            "swap": ((u, v), (v, u)),
            "W": ((u, v), (v, w)),
        }[block]
        c1 = _codes_with_anchor(r, p1, *z1, rng)
        c2 = _codes_with_anchor(r, p1, *z2, rng)
        joint += np.bincount(c1 * k + c2, minlength=k * k)
        done += m
    joint = joint.reshape(k, k) / trials
    m1, m2 = joint.sum(axis=1), joint.sum(axis=0)
    outer = np.outer(m1, m2)
    cov = joint - outer
    second = joint * (1 - 2 * m1[:, None] - 2 * m2[None, :] + 2 * outer) + outer * (m1[:, None] + m2[None, :])
    var = np.maximum(second - (joint - 2 * outer) ** 2, 0.0)
    return cov, np.sqrt(var / trials)


def _sigma_monte_carlo(r, p1, p2, trials, rng) -> SigmaMatrix:
    weights = _block_weights(r, p1, p2)
    scale = 1.0 / factorial(r - 1) ** 2
    k = factorial(r)
    total = np.zeros((k, k))
    var = np.zeros((k, k))
    for block, wgt in weights.items():
        if wgt == 0:
            continue
        cov, se = _paired_block(r, p1, block, trials, rng)
        total += wgt * (cov + cov.T) / 2
        var += wgt**2 * se**2
    return SigmaMatrix(r, p1, p2, total * scale, stderr=np.sqrt(var) * scale)


# --- the A^pi matrices -------------------------------------------------------------------


def a_matrix(pattern) -> list[list[Fraction]]:
    """``A[i][j] = [j = pi(i)] - 1/r`` (0-based indices)."""
    p = tuple(pattern)
    r = len(p)
    return [[Fraction(int(p[i] == j + 1)) - Fraction(1, r) for j in range(r)] for i in range(r)]


def a_span_dimensions(r: int) -> tuple[int, int]:
    """Dimensions of ``span{A^pi}`` and ``span{A^pi + A^{pi^-1}}`` over all patterns of size ``r``."""
    from .linalg import rational_rank

    plain, sym = [], []
    for p in all_patterns(r):
        inv = [0] * r
        for i, v in enumerate(p):
            inv[v - 1] = i + 1
        a, b = a_matrix(p), a_matrix(inv)
        plain.append([x for row in a for x in row])
        sym.append([x + y for ra, rb in zip(a, b) for x, y in zip(ra, rb)])
    return rational_rank(plain), rational_rank(sym)
