"""The acceptance suite: every criterion as a function of one seed, plus a deterministic report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import exp, factorial, sqrt
from typing import Callable

import numpy as np

from .. import stats
from ..geometry import conjugate_uniform_batch, sample_t_cyclic_batch
from ..oracle import brute_lds_k_table
from ..theory import (
    f_lskv,
    janson_ld_bound,
    matrix_rank,
    mu_pattern,
    mu_pattern_exact,
    psi_closed_form,
    sigma_matrix_general,
    sigma_matrix_p2,
    stein_bound,
)
from ..theory.patterns import psi_monte_carlo
from .config import ExperimentConfig
from .experiments import run_experiment
from .properties import P_MIN, run_properties, sampler_uniformity
from .rng import derive_seed

DEFAULT_SEED = 0

# name -> (experiment kind, config fields); seeds are derived from the suite seed
ACCEPTANCE_CONFIGS = {
    "lds_two_cycles": ("lds", {
        "type_spec": {"kind": "all_p_cycles", "params": {"p": 2}}, "n": 20000, "trials": 50,
        "tolerances": {"lds_mean": [1.90, 2.05], "lis_mean": [1.90, 3.47]}}),
    "lds_single_cycle": ("lds", {
        "type_spec": {"kind": "single_cycle", "params": {}}, "n": 20000, "trials": 50,
        "tolerances": {"lds_mean": [1.90, 2.05], "lis_mean": [1.90, 3.47]}}),
    "lis_involution_alpha2": ("lds", {
        "type_spec": {"kind": "involution", "params": {"alpha": 2.0}}, "n": 10000, "trials": 50,
        "tolerances": {"lis_mean": [2.35, 2.65]}}),
    "shape_three_cycles": ("shape", {
        "type_spec": {"kind": "all_p_cycles", "params": {"p": 3}}, "n": 9999, "trials": 20,
        "params": {"r_grid": [0.5, 1.0, 1.5, 2.5]},
        "tolerances": {"max_dev": 0.05, "tail_mass": [0.99, 1.0]}}),
    "records_gaussian": ("records", {
        "type_spec": {"kind": "single_cycle", "params": {}}, "n": 1000000, "trials": 500,
        "params": {"normalization": "gaussian", "alpha": "inf"},
        "tolerances": {"ks_high": 0.08}}),
    "records_gamma": ("records", {
        "type_spec": {"kind": "involution", "params": {"fixed": 999000}}, "n": 1000000, "trials": 500,
        "params": {"normalization": "gamma", "alpha": 0},
        "tolerances": {"ks_high": 0.10, "z_mean": [1.6, 2.4]}}),
    "records_low_involution": ("records", {
        "type_spec": {"kind": "all_p_cycles", "params": {"p": 2}}, "n": 1000000, "trials": 500,
        "params": {"normalization": "gaussian", "alpha": "inf"},
        "tolerances": {"lrec_var_over_log_n": [1.5, 2.5]}}),
    "records_low_three_cycles": ("records", {
        "type_spec": {"kind": "all_p_cycles", "params": {"p": 3}}, "n": 999999, "trials": 500,
        "params": {"normalization": "gaussian", "alpha": "inf"},
        "tolerances": {"lrec_var_over_log_n": [0.6, 1.4]}}),
    "records_low_first_order": ("records", {
        "type_spec": {"kind": "fixed_plus_cycle", "params": {"exponent": 0.75}}, "n": 1000000, "trials": 500,
        "params": {"normalization": "full", "alpha": "auto"},
        "tolerances": {"lrec_first_order": [1.6, 2.4]}}),
    "patterns_single_cycle": ("patterns", {
        "type_spec": {"kind": "single_cycle", "params": {}}, "n": 2000, "trials": 2000,
        "params": {"pattern": "21"}, "tolerances": {"var_ratio": [0.9, 1.1]}}),
    "patterns_two_cycles": ("patterns", {
        "type_spec": {"kind": "all_p_cycles", "params": {"p": 2}}, "n": 2000, "trials": 2000,
        "params": {"pattern": "21"}, "tolerances": {"var_ratio": [0.9, 1.1]}}),
    # reported, not gating
    "records_intermediate": ("records", {
        "type_spec": {"kind": "involution", "params": {"fixed": 780000}}, "n": 1000000, "trials": 500,
        "params": {"normalization": "full", "alpha": "auto"},
        "tolerances": {"ks_high": 0.08}}),
    "patterns_ewens_mean": ("patterns", {
        "type_spec": {"kind": "ewens", "params": {"theta": 2.0}}, "n": 500, "trials": 2000,
        "params": {"pattern": "12"}, "tolerances": {"mean_z": 3.0}}),
    "shape_ewens_rescaled": ("shape", {
        "type_spec": {"kind": "ewens", "params": {"theta": 1.0}}, "n": 10000, "trials": 20,
        "params": {"r_grid": [0.5, 1.0, 1.5], "rescale": True}, "tolerances": {"max_dev": 0.05}}),
}


def acceptance_config(name: str, seed: int = DEFAULT_SEED) -> tuple[str, ExperimentConfig]:
    kind, fields = ACCEPTANCE_CONFIGS[name]
    cfg = ExperimentConfig.from_dict({"name": name, **fields, "seed": derive_seed(seed, name)})
    return kind, cfg


@dataclass
class CriterionResult:
    number: int | None
    title: str
    passed: bool
    details: list[str] = field(default_factory=list)
    gating: bool = True

    def __post_init__(self):
        self.passed = bool(self.passed)

    def to_dict(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "gating": self.gating, "details": self.details}

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        label = f"criterion {self.number}" if self.number is not None else "supplementary"
        suffix = "" if self.gating else " (non-gating)"
        return f"[{tag}] {label}: {self.title}{suffix}"


def _experiment(name, seed, threads):
    kind, cfg = acceptance_config(name, seed)
    report = run_experiment(kind, cfg, threads=threads, with_plot=False)
    return report, [f"{name}: {c.describe()} ({c.limit})" for c in report.checks]


# --- criteria ------------------------------------------------------------------------------


def criterion_1(seed, threads=1, sampler: Callable = sample_t_cyclic_batch,
                reference: Callable = conjugate_uniform_batch, samples: int = 100_000):
    rows = sampler_uniformity(derive_seed(seed, "criterion:1"), samples, 6, sampler, reference)
    worst_a = min(rows, key=lambda row: row[1])
    worst_b = min(rows, key=lambda row: row[2])
    worst_ab = min(rows, key=lambda row: row[3])
    ok = all(min(a, b, c) > P_MIN for _, a, b, c in rows)
    details = [
        f"{len(rows)} classes, {samples} samples each, threshold p > {P_MIN:g}",
        f"geometric sampler: min p = {worst_a[1]:.4g} at type {worst_a[0]}",
        f"conjugation sampler: min p = {worst_b[2]:.4g} at type {worst_b[0]}",
        f"two-sample test: min p = {worst_ab[3]:.4g} at type {worst_ab[0]}",
    ]
    failing = [str(t) for t, a, b, c in rows if min(a, b, c) <= P_MIN]
    if failing:
        details.append("failing types: " + " ".join(failing))
    return CriterionResult(1, "sampler uniformity on every class with n <= 6", ok, details), rows


def criterion_2(seed, threads=1):
    n = 8
    perms = np.array(list(permutations(range(1, n + 1))), dtype=np.int64)
    brute = brute_lds_k_table(perms)
    mismatches = 0
    for row, expected in zip(perms, brute):
        shape = stats.rs_shape(row)
        got = [stats.lds_k(row, k, shape) for k in range(n + 1)]
        mismatches += got != expected.tolist()
    details = [f"{len(perms)} permutations x {n + 1} values of k, {mismatches} mismatching permutations"]
    return CriterionResult(2, "Greene column sums equal brute-force LDS_k on S_8", mismatches == 0, details)


def criteria_3_4(seed, threads=1):
    reports = [_experiment(name, seed, threads) for name in ("lds_two_cycles", "lds_single_cycle")]
    c3, c4 = [], []
    ok3 = ok4 = True
    for report, _ in reports:
        for c in report.checks:
            line = f"{report.config.name}: {c.describe()} ({c.limit})"
            if c.name == "lds_mean":
                ok3 &= c.passed
                c3.append(line)
            else:
                ok4 &= c.passed
                c4.append(line)
    return (CriterionResult(3, "LDS / sqrt n near 2 for fixed-point-free types", ok3, c3),
            CriterionResult(4, "LIS / sqrt n inside [2, 2 sqrt 3] up to finite-n slack", ok4, c4))


def criterion_5(seed, threads=1):
    report, details = _experiment("lis_involution_alpha2", seed, threads)
    return CriterionResult(5, "involution LIS with alpha sqrt n fixed points, alpha = 2", report.passed, details)


def criterion_6(seed, threads=1):
    report, details = _experiment("shape_three_cycles", seed, threads)
    at2 = f_lskv(2.0)
    ok_at2 = abs(at2 - 1.0) <= 1e-6
    details.append(f"F_LSKV(2) = {at2!r}, required 1 +- 1e-6")
    return CriterionResult(6, "limit shape of the RS diagram", report.passed and ok_at2, details)


def criterion_7(seed, threads=1):
    details = []
    ok = True
    for name in ("records_gaussian", "records_gamma"):
        report, lines = _experiment(name, seed, threads)
        ok &= report.passed
        details += lines
        z = report.summary["z_high"]
        details.append(f"{name}: standardized mean {z['mean']:.4g}, variance {z['variance']:.4g}")
    return CriterionResult(7, "high-record limit laws in the Gaussian and Gamma regimes", ok, details)


def criterion_8(seed, threads=1):
    details = []
    ok = True
    for name in ("records_low_involution", "records_low_three_cycles", "records_low_first_order"):
        report, lines = _experiment(name, seed, threads)
        ok &= report.passed
        details += lines
    return CriterionResult(8, "low-record fluctuations and first-order growth", ok, details)


def criterion_9(seed, threads=1):
    details = []
    ok = True
    for name in ("patterns_single_cycle", "patterns_two_cycles"):
        report, lines = _experiment(name, seed, threads)
        ok &= report.passed
        details += lines
        details.append(f"{name}: Sigma_21,21 = {report.theory['sigma_pi_pi']:.10g} (p2 = {report.theory['p2']:g})")
    worst = 0.0
    for r in (2, 3):
        for p2 in (0.0, 0.5, 1.0):
            a = sigma_matrix_p2(r, p2).entries
            b = sigma_matrix_general(r, 0.0, p2).entries
            worst = max(worst, float(np.abs(a - b).max()))
    ok &= worst <= 1e-12
    details.append(f"Bernstein route vs order-enumeration route at p1 = 0, r = 2, 3: max |diff| = {worst:.3g}")
    for r in (2, 3, 4):
        for p2 in (0.0, 0.5, 1.0):
            rank = matrix_rank(sigma_matrix_p2(r, p2).entries, 1e-9)
            want = r * (r - 1) // 2 if p2 == 1.0 else (r - 1) ** 2
            ok &= rank == want
            details.append(f"rank Sigma^(p2={p2:g}) for r = {r}: {rank} (expected {want})")
    return CriterionResult(9, "pattern-count variance and covariance matrix structure", ok, details)


def criterion_10(seed, threads=1, trials: int = 1_000_000):
    details = []
    exact_ok = all(mu_pattern_exact(p, 0) == Fraction(1, factorial(r))
                   for r in range(1, 5) for p in stats.all_patterns(r))
    details.append(f"mu_pi at p1 = 0 equals 1/r! exactly for r <= 4: {exact_ok}")
    grid = np.linspace(0, 1, 20)
    closed = grid**2 + 4 / 3 * grid * (1 - grid) + 0.5 * (1 - grid) ** 2
    dev = max(abs(mu_pattern((1, 2), float(p)) - c) for p, c in zip(grid, closed))
    details.append(f"r = 2 closed form vs enumeration at 20 values of p1: max |diff| = {dev:.3g}")
    ok = exact_ok and dev <= 1e-12
    rng = np.random.default_rng(derive_seed(seed, "criterion:10"))
    points = ((0.3, 0.7), (0.85, 0.2))
    worst = 0.0
    count = 0
    for r in (2, 3, 4):
        for p in stats.all_patterns(r):
            for z in points:
                est = psi_monte_carlo(p, 0.0, z, trials, rng)
                dz = abs(est.value - psi_closed_form(p, *z)) / est.stderr if est.stderr > 0 else 0.0
                worst = max(worst, dz)
                count += 1
    ok &= worst <= 4
    details.append(f"Monte Carlo psi vs closed form, {count} (pattern, point) pairs at {trials} trials: "
                   f"max |diff| / stderr = {worst:.3g} (required <= 4)")
    return CriterionResult(10, "exact occurrence probabilities and one-point functions", ok, details)


# values worked out by hand from the bound formulas
STEIN_SPOTS = (
    ((1000, 2, 2.5e8), 3.36 * sqrt(10) + 57.6 / sqrt(2.5)),
    ((50, 3, 1e7), 19.6875 * sqrt(50) + 2109.375 / sqrt(10)),
)
JANSON_SPOTS = (
    ((100, 2, 500.0), 2 * exp(-1 / 6)),
    ((30, 3, 1000.0), 2 * exp(-4 / 3 * 1e6 / 30**5)),
)


def criterion_11(seed, threads=1):
    details = []
    ok = True
    for args, want in STEIN_SPOTS:
        got = stein_bound(*args)
        rel = abs(got - want) / want
        ok &= rel <= 1e-9
        details.append(f"stein_bound{args} = {got:.12g}, hand value {want:.12g}, rel err {rel:.2g}")
    for args, want in JANSON_SPOTS:
        got = janson_ld_bound(*args)
        rel = abs(got - want) / want
        ok &= rel <= 1e-9
        details.append(f"janson_ld_bound{args} = {got:.12g}, hand value {want:.12g}, rel err {rel:.2g}")
    for r, sigma2 in ((2, 1 / 36), (3, float(sigma_matrix_p2(3, 0.0).entries[0, 0]))):
        sizes = [10**3, 10**4, 10**5, 10**6]
        scaled = [stein_bound(n, r, sigma2 * n ** (2 * r - 1)) * sqrt(n) for n in sizes]
        spread = max(scaled) / min(scaled) - 1
        ok &= spread <= 1e-9
        details.append(f"r = {r}: sqrt(n) * bound constant over n = 1e3..1e6 to rel {spread:.2g}")
    return CriterionResult(11, "normal-approximation and large-deviation bound formulas", ok, details)


def criterion_12(seed, threads=1, uniformity=None):
    results = run_properties(derive_seed(seed, "criterion:12"), uniformity)
    failed = [r for r in results if not r.passed]
    details = [f"{len(results)} properties, {len(failed)} failed"]
    details += [f"FAILED {r.module}: {r.name} {r.detail}".rstrip() for r in failed]
    details += [f"note {r.module}: {r.detail}" for r in results if r.passed and r.detail]
    return CriterionResult(12, "module property suites", not failed, details)


def supplementary(seed, threads=1):
    out = []
    titles = {
        "records_intermediate": "high records with alpha near 1 (slow convergence)",
        "patterns_ewens_mean": "mean pattern count under Ewens(2) against the realized-type expectation",
        "shape_ewens_rescaled": "limit shape under Ewens(1) rescaled by the non-fixed points",
    }
    for name, title in titles.items():
        report, details = _experiment(name, seed, threads)
        out.append(CriterionResult(None, title, report.passed, details, gating=False))
    return out


# --- suite ---------------------------------------------------------------------------------


@dataclass
class AcceptanceReport:
    seed: int
    results: list[CriterionResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results if r.gating)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json(self) -> str:
        doc = {"seed": self.seed, "passed": self.passed, "criteria": [r.to_dict() for r in self.results]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            out.append(r.line())
            out += [f"    {d}" for d in r.details]
        return out


def run_all_acceptance(seed: int = DEFAULT_SEED, threads: int = 1, sampler: Callable = sample_t_cyclic_batch,
                       include_supplementary: bool = True, progress: Callable | None = None) -> AcceptanceReport:
    results = []

    def add(*items):
        for item in items:
            results.append(item)
            if progress is not None:
                progress(item)

    c1, rows = criterion_1(seed, threads, sampler=sampler)
    add(c1)
    add(criterion_2(seed, threads))
    add(*criteria_3_4(seed, threads))
    for fn in (criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, criterion_10, criterion_11):
        add(fn(seed, threads))
    # the property suite reuses the class-uniformity tables only when they come from the real sampler
    add(criterion_12(seed, threads, rows if sampler is sample_t_cyclic_batch else None))
    if include_supplementary:
        add(*supplementary(seed, threads))
    return AcceptanceReport(seed, results)
