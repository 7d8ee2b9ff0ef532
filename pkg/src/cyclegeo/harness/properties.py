"""Invariant and property checks for every module, run as one suite."""

from __future__ import annotations

import tempfile
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb, factorial

import numpy as np
from scipy.stats import chisquare

from .. import kernels, stats
from ..cycle_type import (
    CycleType,
    all_p_cycles,
    enumerate_cycle_types,
    ewens_type,
    fixed_plus_cycle,
    from_cycle_lengths,
    involution_type,
    remove_fixed_points,
)
from ..geometry import (
    conjugate_uniform_batch,
    cycle_type_of,
    perm_of_points,
    sample_point_set,
    sample_t_cyclic,
    sample_t_cyclic_batch,
    shift_array,
    split_diagonal,
    tripartition_labels,
)
from ..oracle import (
    brute_lds_k_table,
    brute_lis,
    brute_pattern_count,
    chi_square_uniformity,
    enumerate_class,
    exact_statistic_distribution,
    orbit_size,
    two_sample_chi_square,
)
from ..theory import (
    a_span_dimensions,
    f_lskv,
    mu_vector_exact,
    psi_closed_form,
    sigma_matrix_general,
    sigma_matrix_p2,
)
from ..theory.patterns import pattern_codes
from .config import ExperimentConfig, TypeSpec
from .rng import derive_seed

P_MIN = 1e-3


@dataclass(frozen=True)
class PropertyResult:
    module: str
    name: str
    passed: bool
    detail: str = ""

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))

    def to_dict(self) -> dict:
        return {"module": self.module, "name": self.name, "passed": self.passed, "detail": self.detail}


def _rng(seed, label):
    return np.random.default_rng(derive_seed(seed, label))


# --- shared sampler checks (also used by the uniformity criterion) --------------------------


def types_up_to(n_max: int) -> list[CycleType]:
    return [t for n in range(1, n_max + 1) for t in enumerate_cycle_types(n)]


def sampler_uniformity(seed: int, samples: int = 100_000, n_max: int = 6,
                       sampler=sample_t_cyclic_batch, reference=conjugate_uniform_batch):
    """Per cycle type: chi-square p-values of both samplers and of their two-sample test."""
    rows = []
    for t in types_up_to(n_max):
        label = f"uniformity:{t}"
        a = sampler(t, samples, _rng(seed, label + ":a"))
        b = reference(t, samples, _rng(seed, label + ":b"))
        rows.append((t, chi_square_uniformity(a, t), chi_square_uniformity(b, t), two_sample_chi_square(a, b)))
    return rows


# --- cycle_type -----------------------------------------------------------------------------


def _random_generator_call(rng):
    kind = rng.integers(5)
    n = int(rng.integers(1, 200))
    if kind == 0:
        divisors = [p for p in range(1, n + 1) if n % p == 0]
        return n, all_p_cycles(n, int(rng.choice(divisors)))
    if kind == 1:
        return n, involution_type(n, n - 2 * int(rng.integers(0, n // 2 + 1)))
    if kind == 2:
        return n, fixed_plus_cycle(n, int(rng.integers(0, n + 1)))
    if kind == 3:
        return n, ewens_type(n, float(rng.choice([0.5, 1.0, 3.0])), rng)
    lengths = []
    while sum(lengths) < n:
        lengths.append(int(rng.integers(1, n - sum(lengths) + 1)))
    return n, from_cycle_lengths(lengths)


def check_cycle_type(seed):
    rng = _rng(seed, "cycle_type")
    out = []
    bad = 0
    types = []
    for _ in range(10_000):
        n, t = _random_generator_call(rng)
        bad += t.n != n
        types.append(t)
    out.append(PropertyResult("cycle_type", "size identity over 10^4 generator calls", bad == 0, f"{bad} mismatches"))
    idem = all(remove_fixed_points(remove_fixed_points(t)) == remove_fixed_points(t) for t in types[:2000])
    out.append(PropertyResult("cycle_type", "remove_fixed_points idempotent", idem))
    ref = list(enumerate_cycle_types(5))
    tally = Counter(ewens_type(5, 1.0, rng) for _ in range(100_000))
    expected = np.array([t.class_size() / 120 * 100_000 for t in ref])
    observed = np.array([tally[t] for t in ref])
    p = float(chisquare(observed, expected).pvalue) if sum(tally.values()) == observed.sum() else 0.0
    out.append(PropertyResult("cycle_type", "Ewens(1) cycle type law on S_5", p > P_MIN, f"p={p:.4g}"))
    return out


# --- geometry -------------------------------------------------------------------------------


def _off_diagonal_batch(t, size, rng):
    """One-line permutations of the non-diagonal points of ``size`` constructions."""
    s = shift_array(t)
    off = np.nonzero(s != np.arange(t.n))[0]
    u = rng.random((size, t.n))
    x, y = u[:, off], u[:, s[off]]
    ys = np.take_along_axis(y, np.argsort(x, axis=1), axis=1)
    ranks = np.argsort(np.argsort(ys, axis=1), axis=1)
    return ranks + 1


def check_geometry(seed, uniformity=None):
    out = []
    rng = _rng(seed, "geometry:sampler")
    bad = 0
    for _ in range(10_000):
        n = int(rng.integers(1, 501))
        t = ewens_type(n, float(rng.choice([0.3, 1.0, 4.0])), rng)
        bad += cycle_type_of(sample_t_cyclic(t, rng)) != t
    out.append(PropertyResult("geometry", "sampled permutation has the requested cycle type (10^4 types, n <= 500)",
                              bad == 0, f"{bad} mismatches"))

    rows = uniformity if uniformity is not None else sampler_uniformity(derive_seed(seed, "geometry:uniform"))
    worst = min(min(p1, p2) for _, p1, p2, _ in rows)
    out.append(PropertyResult("geometry", "uniformity on every class with n <= 6", worst > P_MIN, f"min p={worst:.4g}"))
    worst2 = min(p for *_, p in rows)
    out.append(PropertyResult("geometry", "two samplers agree in law, n <= 6", worst2 > P_MIN, f"min p={worst2:.4g}"))

    rng = _rng(seed, "geometry:split")
    ps = sample_point_set(CycleType((2, 1, 1)), rng)
    _, off = split_diagonal(ps)
    consistent = cycle_type_of(perm_of_points(off)) == remove_fixed_points(CycleType((2, 1, 1)))
    pvals = []
    for t in types_up_to(6):
        rest = remove_fixed_points(t)
        if t.fixed_points == 0 or rest.n < 2:
            continue
        pvals.append(chi_square_uniformity(_off_diagonal_batch(t, 100_000, rng), rest))
    out.append(PropertyResult("geometry", "off-diagonal part is uniform on the reduced class",
                              consistent and min(pvals) > P_MIN, f"min p={min(pvals):.4g} over {len(pvals)} types"))

    rng = _rng(seed, "geometry:tripartition")
    ok = True
    for _ in range(500):
        n = int(rng.integers(2, 400))
        t = remove_fixed_points(ewens_type(n, 1.0, rng))
        if t.n < 2:
            continue
        labels = tripartition_labels(t)
        s = shift_array(t)
        sizes = np.bincount(labels, minlength=3)
        ok &= bool(np.all(labels != labels[s])) and int(sizes.max() - sizes.min()) <= 1
    out.append(PropertyResult("geometry", "tripartition separates cyclic neighbours and is balanced", ok))

    rng = _rng(seed, "geometry:box")
    t = all_p_cycles(12, 2)
    s = shift_array(t)
    u = rng.random((100_000, 12))
    y = u[:, s]
    inside = (u <= 0.5) & (y >= 0.5)
    counts = inside.sum(axis=1)
    pvals = []
    for m in (2, 3, 4):
        sel = np.nonzero(counts == m)[0]
        xs = u[sel][inside[sel]].reshape(-1, m)
        ys = y[sel][inside[sel]].reshape(-1, m)
        codes = np.bincount(pattern_codes(xs, ys), minlength=factorial(m))
        pvals.append(float(chisquare(codes).pvalue))
    out.append(PropertyResult("geometry", "pattern inside a box is uniform given its size (m = 2, 3, 4)",
                              min(pvals) > P_MIN, "p=" + ", ".join(f"{p:.4g}" for p in pvals)))
    return out


# --- stats ----------------------------------------------------------------------------------


def greene_matches_brute(n: int) -> bool:
    perms = np.array(list(permutations(range(1, n + 1))), dtype=np.int64)
    brute = brute_lds_k_table(perms)
    for row, expected in zip(perms, brute):
        sums = stats.rs_shape(row).column_prefix_sums()
        got = np.array([sums[min(k, len(sums) - 1)] for k in range(n + 1)])
        if not np.array_equal(got, expected):
            return False
    return True


def check_stats(seed):
    out = []
    ok = all(greene_matches_brute(n) for n in range(1, 9))
    out.append(PropertyResult("stats", "Greene column sums equal brute force, all perms n <= 8, all k", ok))

    dual = True
    for n in range(1, 9):
        for p in permutations(range(1, n + 1)):
            shape = stats.rs_shape(p)
            dual &= shape.rows[0] == stats.lis(p) and shape.columns[0] == stats.lds(p)
    out.append(PropertyResult("stats", "first row is LIS and first column is LDS, n <= 8", dual))

    rng = _rng(seed, "stats:patterns")
    complete = True
    for _ in range(200):
        n = int(rng.integers(3, 31))
        perm = rng.permutation(n) + 1
        for r in (1, 2, 3):
            complete &= sum(stats.pattern_counts(perm, r)) == comb(n, r)
    out.append(PropertyResult("stats", "pattern counts sum to C(n, r), r <= 3, n <= 30", complete))

    inv_ok = True
    for n in range(1, 51):
        perm = rng.permutation(n) + 1
        enum = int(kernels.pattern_counts(perm - 1, 2)[1]) if n >= 2 else 0
        inv_ok &= stats.inversions(perm) == enum == (brute_pattern_count(perm, (2, 1)) if n <= 20 else enum)
    out.append(PropertyResult("stats", "inversion shortcut equals subset enumeration, n <= 50", inv_ok))

    sym = True
    literal = True
    for n in range(1, 8):
        for p in permutations(range(1, n + 1)):
            comp = [n + 1 - v for v in p]
            rc = stats.reverse_complement(p).as_tuple()
            # reverse-complement sends left-to-right maxima to right-to-left minima
            rl_minima = sum(1 for i in range(n) if all(rc[j] > rc[i] for j in range(i + 1, n)))
            sym &= stats.records(p).high == stats.records(comp).low == rl_minima
            literal &= stats.records(p).high == stats.records(rc).low
    out.append(PropertyResult("stats", "record symmetry: high(tau) = low(complement), n <= 7", sym,
                              f"high(tau) = low(reverse-complement) holds literally: {literal}"))
    return out


# --- theory ---------------------------------------------------------------------------------


def check_theory(seed):
    out = []
    rows_ok = True
    for r in (2, 3, 4):
        for p2 in (0, 0.5, 1):
            rows_ok &= all(v == 0 for v in sigma_matrix_p2(r, p2).numerators.sum(axis=1))
    for r in (2, 3):
        for p1, p2 in ((0.25, 0.5), (0.6, 0.3)):
            rows_ok &= all(v == 0 for v in sigma_matrix_general(r, p1, p2).numerators.sum(axis=1))
    mc = sigma_matrix_general(3, 0.25, 0.5, method="mc", trials=50_000, rng=_rng(seed, "theory:mc"))
    rows_ok &= bool(np.all(np.abs(mc.row_sums()) <= 4 * np.sqrt((mc.stderr**2).sum(axis=1)) + 1e-12))
    out.append(PropertyResult("theory", "covariance rows sum to zero (exact and Monte Carlo)", rows_ok))

    affine = True
    for r in (2, 3, 4):
        a, b, c = (sigma_matrix_p2(r, p) for p in (Fraction(0), Fraction(1, 4), Fraction(1, 2)))
        affine &= bool(np.all(2 * b.numerators * (a.denominator * c.denominator)
                              == a.numerators * (b.denominator * c.denominator)
                              + c.numerators * (a.denominator * b.denominator)))
    out.append(PropertyResult("theory", "Sigma^{p2} affine in p2 (exact, three collinear points)", affine))

    mu_ok = all(sum(mu_vector_exact(r, p1)) == 1 for r in (1, 2, 3, 4) for p1 in (0, Fraction(1, 3), 0.8, 1))
    out.append(PropertyResult("theory", "mu sums to 1 over S_r, r <= 4", mu_ok))

    grid = np.linspace(0, 2, 100)
    vals = np.array([f_lskv(r) for r in grid])
    mids = np.array([f_lskv((a + b) / 2) for a, b in zip(grid[:-2], grid[2:])])
    shape_ok = bool(np.all(np.diff(vals) >= -1e-12) and np.all(mids >= (vals[:-2] + vals[2:]) / 2 - 1e-9))
    out.append(PropertyResult("theory", "F_LSKV nondecreasing and midpoint-concave on 100 points", shape_ok))

    rng = _rng(seed, "theory:lipschitz")
    lip = True
    for r in (2, 3, 4):
        pats = stats.all_patterns(r)
        for _ in range(300):
            p = pats[rng.integers(len(pats))]
            z1, z2 = rng.random(2), rng.random(2)
            lip &= abs(psi_closed_form(p, *z1) - psi_closed_form(p, *z2)) <= (r - 1) * np.abs(z1 - z2).sum() + 1e-12
    out.append(PropertyResult("theory", "psi is (r-1)-Lipschitz in L1, r <= 4", lip))

    spans = {r: a_span_dimensions(r) for r in (2, 3, 4)}
    span_ok = all(spans[r] == ((r - 1) ** 2, r * (r - 1) // 2) for r in spans)
    out.append(PropertyResult("theory", "span dimensions of A^pi and A^pi + A^{pi^-1}", span_ok, str(spans)))
    return out


# --- oracle ---------------------------------------------------------------------------------


def check_oracle(seed):
    out = []
    sizes = all(len(enumerate_class(t)) == orbit_size(t) == t.class_size() for t in types_up_to(8))
    out.append(PropertyResult("oracle", "class enumeration matches the orbit-size formula, n <= 8", sizes))

    def law(t, pattern):
        return exact_statistic_distribution(t, "pattern:" + "".join(map(str, pattern))).support

    # conjugation by the reversal and inversion both preserve the class
    sym = True
    literal = True
    for t in types_up_to(6):
        for r in (2, 3):
            if t.n < r:
                continue
            for p in stats.all_patterns(r):
                rc = tuple(r + 1 - v for v in reversed(p))
                inv = tuple(int(v) + 1 for v in np.argsort(p))
                sym &= law(t, p) == law(t, rc) == law(t, inv)
                if r == 2:
                    literal &= law(t, p) == law(t, tuple(r + 1 - v for v in p))
    out.append(PropertyResult("oracle", "X_pi equal in law to X_rc(pi) and X_pi^-1 on every class, n <= 6", sym,
                              f"X_pi equal in law to X_complement(pi) holds literally: {literal}"))

    rng = _rng(seed, "oracle:ldsk")
    perms = [np.array(p) for n in range(1, 8) for p in permutations(range(1, n + 1))]
    perms += [rng.permutation(10) + 1 for _ in range(200)]
    mono = True
    for n in range(1, 11):
        block = [p for p in perms if p.size == n]
        if not block:
            continue
        table = brute_lds_k_table(np.array(block))
        for p, row in zip(block, table):
            reach = brute_lis(p.tolist())
            mono &= bool(np.all(np.diff(row) >= 0)) and row[reach] == n and (reach == 0 or row[reach - 1] < n)
    out.append(PropertyResult("oracle", "brute LDS_k nondecreasing, first reaching n at k = LIS", mono))
    return out


# --- harness --------------------------------------------------------------------------------


def check_harness(seed):
    from .experiments import run_experiment, verify_report_dir

    out = []
    cfg = ExperimentConfig("determinism", TypeSpec("all_p_cycles", {"p": 2}), 400, 12, derive_seed(seed, "harness"),
                           {"r_grid": [0.5, 1.0, 2.5]}, {"max_dev": 0.2})
    one = run_experiment("shape", cfg, threads=1)
    two = run_experiment("shape", cfg, threads=2)
    same = one.raw_csv() == two.raw_csv() and one.summary_json() == two.summary_json()
    out.append(PropertyResult("harness", "raw values identical for 1 and 2 workers", same))

    with tempfile.TemporaryDirectory() as d:
        one.write(d)
        verified = verify_report_dir(d)
    out.append(PropertyResult("harness", "summary recomputes exactly from raw values", verified))

    pcfg = ExperimentConfig("theory-refs", TypeSpec("all_p_cycles", {"p": 2}), 60, 5, derive_seed(seed, "refs"),
                            {"pattern": "21"})
    prep = run_experiment("patterns", pcfg)
    refs = (all(one.theory[f"f_lskv_r{r:g}"] == f_lskv(r) for r in (0.5, 1.0, 2.5))
            and prep.theory["sigma_pi_pi"] == float(sigma_matrix_p2(2, 1.0).entries[1, 1]))
    out.append(PropertyResult("harness", "embedded theory values match the theory module", refs))
    return out


def run_properties(seed: int, uniformity=None) -> list[PropertyResult]:
    results = []
    results += check_cycle_type(seed)
    results += check_geometry(seed, uniformity)
    results += check_stats(seed)
    results += check_theory(seed)
    results += check_oracle(seed)
    results += check_harness(seed)
    return results
