"""Monte Carlo experiments: monotone subsequences, limit shape, records, pattern counts.

Each experiment is a per-trial function (pure in ``(cfg, trial)``) plus a
summarizer that derives every reported number from the raw table. The
summarizer is reused to verify written reports.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from math import comb, floor, log, sqrt
from typing import Callable

import numpy as np
from scipy.stats import norm

from .. import kernels
from ..cycle_type import CycleType
from ..geometry import shift_array
from ..oracle import ks_statistic
from ..stats import pattern_rank
from ..theory import (
    ALPHA_INFINITY,
    f_lskv,
    high_record_limit_cdf,
    high_record_limit_mean,
    mu_pattern,
    sigma_matrix_general,
    sigma_matrix_p2,
    stein_bound,
)
from ..theory.records import normalize_alpha
from ..theory.sigma import SIGMA_EXACT_MAX_R
from .config import ConfigError, ExperimentConfig
from .report import ExperimentReport, bracket_check, describe_column, read_raw_csv
from .rng import derive_trial_rng
from .svg import polyline_svg

DEFAULT_R_GRID = (0.5, 1.0, 1.5, 2.5)


def sample_sequence(t: CycleType, rng: np.random.Generator, shift=None) -> np.ndarray:
    """Heights of the construction's points read from left to right.

    Same relative order as the sampled ``t``-cyclic permutation, so
    order-only statistics can skip the rank computation.
    """
    n = t.n
    s = shift_array(t) if shift is None else shift
    while True:
        u = rng.random(n)
        order = np.argsort(u)
        su = u[order]
        if n < 2 or not np.any(su[1:] == su[:-1]):
            return u[s][order]


def _ranks(y: np.ndarray) -> np.ndarray:
    r = np.empty(y.size, dtype=np.int64)
    r[np.argsort(y)] = np.arange(y.size)
    return r


def _trial_setup(cfg: ExperimentConfig, trial: int):
    rng = derive_trial_rng(cfg.seed, trial)
    t = cfg.type_spec.draw(cfg.n, rng)
    return rng, t


def run_trials(trial_fn: Callable, cfg: ExperimentConfig, threads: int = 1) -> list[dict]:
    """Run ``trial_fn(cfg, k)`` for every trial; results ordered by trial index."""
    fn = partial(trial_fn, cfg)
    if threads <= 1 or cfg.trials == 1:
        return [fn(k) for k in range(cfg.trials)]
    chunk = max(1, cfg.trials // (4 * threads))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(cfg.trials), chunksize=chunk))


def _table(rows: list[dict]) -> tuple[list[str], dict[str, list]]:
    columns = list(rows[0])
    return columns, {c: [row[c] for row in rows] for c in columns}


def _arr(raw, col) -> np.ndarray:
    return np.asarray(raw[col], dtype=float)


def _checks(cfg: ExperimentConfig, observed: dict, limits: dict):
    """One check per tolerance key present in the config."""
    out = []
    for key in sorted(cfg.tolerances):
        if key not in observed:
            raise ConfigError(f"tolerance {key!r} does not name a reported quantity; options: {sorted(observed)}")
        out.append(bracket_check(key, observed[key], cfg.tolerances[key], limits.get(key, "")))
    return out


# --- monotone subsequences -------------------------------------------------------------


def _lds_trial(cfg: ExperimentConfig, trial: int) -> dict:
    rng, t = _trial_setup(cfg, trial)
    y = sample_sequence(t, rng)
    lis = kernels.lis_length(y)
    lds = kernels.lis_length(np.ascontiguousarray(y[::-1]))
    root = sqrt(cfg.n)
    return {"lds": int(lds), "lis": int(lis), "lds_scaled": lds / root, "lis_scaled": lis / root}


def _involution_alpha(cfg):
    ts = cfg.type_spec
    if ts.kind == "involution" and "alpha" in ts.params:
        return float(ts.params["alpha"])
    if ts.kind == "involution" and "fixed" in ts.params:
        return float(ts.params["fixed"]) / sqrt(cfg.n)
    return None


def _lds_summary(cfg, raw):
    summary = {c: describe_column(raw[c]) for c in ("lds_scaled", "lis_scaled")}
    theory = {"lds_scaled_limit": 2.0, "lis_scaled_bracket": [2.0, 2 * sqrt(3)]}
    alpha = _involution_alpha(cfg)
    limits = {"lds_mean": "limit 2 for fixed-point-free types", "lis_mean": "limit within [2, 2 sqrt 3]"}
    if alpha is not None:
        theory["involution_alpha"] = alpha
        theory["lis_scaled_limit_involution"] = alpha + 1 / alpha if alpha >= 1 else 2.0
        limits["lis_mean"] = f"limit {theory['lis_scaled_limit_involution']:.6g} for fixed points ~ alpha sqrt n"
    observed = {"lds_mean": summary["lds_scaled"]["mean"], "lis_mean": summary["lis_scaled"]["mean"]}
    return summary, theory, _checks(cfg, observed, limits)


# --- limit shape -----------------------------------------------------------------------


def _r_grid(cfg):
    grid = cfg.params.get("r_grid", DEFAULT_R_GRID)
    if any(r < 0 for r in grid):
        raise ConfigError("r_grid values must be non-negative")
    return [float(r) for r in grid]


def _profile_col(r):
    return f"profile_r{r:g}"


def _shape_trial(cfg: ExperimentConfig, trial: int) -> dict:
    rng, t = _trial_setup(cfg, trial)
    rows = np.asarray(kernels.rs_shape(sample_sequence(t, rng)), dtype=np.int64)
    width = int(rows[0]) if rows.size else 0
    # column j has as many boxes as there are rows longer than j
    col_len = np.cumsum(np.bincount(rows, minlength=width + 1)[::-1])[::-1][1:]
    prefix = np.concatenate([[0], np.cumsum(col_len)])
    scale = cfg.n - t.fixed_points if cfg.params.get("rescale", False) else cfg.n
    out = {"scale_n": int(scale)}
    for r in _r_grid(cfg):
        k = int(floor(r * sqrt(scale))) if scale else 0
        out[_profile_col(r)] = float(prefix[min(k, width)] / scale) if scale else 0.0
    return out


def _shape_summary(cfg, raw):
    grid = _r_grid(cfg)
    summary = {_profile_col(r): describe_column(raw[_profile_col(r)]) for r in grid}
    theory = {f"f_lskv_r{r:g}": f_lskv(r) for r in grid}
    devs = [abs(summary[_profile_col(r)]["mean"] - theory[f"f_lskv_r{r:g}"]) for r in grid if r < 2]
    summary["max_abs_deviation"] = max(devs) if devs else 0.0
    tail = [summary[_profile_col(r)]["mean"] for r in grid if r >= 2]
    observed = {"max_dev": summary["max_abs_deviation"]}
    if tail:
        summary["min_tail_mass"] = min(tail)
        observed["tail_mass"] = summary["min_tail_mass"]
    limits = {"max_dev": "deviation tends to 0", "tail_mass": "limit 1 for r >= 2"}
    return summary, theory, _checks(cfg, observed, limits)


def _shape_plot(cfg, raw):
    grid = _r_grid(cfg)
    fine = np.linspace(0, max(grid + [2.0]), 101)
    emp = [float(np.mean(raw[_profile_col(r)])) for r in grid]
    return polyline_svg(
        [("empirical", grid, emp), ("F_LSKV", fine.tolist(), [f_lskv(r) for r in fine])],
        title=cfg.name, xlabel="r", ylabel="LDS_(r sqrt n) / n",
    )


# --- records ---------------------------------------------------------------------------


def _records_trial(cfg: ExperimentConfig, trial: int) -> dict:
    rng, t = _trial_setup(cfg, trial)
    y = sample_sequence(t, rng)
    high, low = kernels.records(y)
    return {"hrec": int(high), "lrec": int(low), "t1": int(t.fixed_points)}


def _record_alpha(cfg, t1):
    spec = cfg.params.get("alpha", "auto")
    if spec == "auto":
        # weight of the Gaussian part implied by the normalization at this size
        if t1 == 0:
            return ALPHA_INFINITY
        n_check = cfg.n - t1
        return n_check * sqrt(log(n_check)) / t1
    if spec in ("inf", "infinity"):
        return ALPHA_INFINITY
    return normalize_alpha(spec)


def standardized_high_records(cfg, hrec, t1) -> np.ndarray:
    """Per-trial standardized high-record counts under ``params.normalization``."""
    mode = cfg.params.get("normalization", "full")
    n = cfg.n
    n_check = n - t1
    if np.any(n_check < 2):
        raise ConfigError("standardization needs at least two non-fixed points")
    if mode == "gaussian":
        return (hrec - log(n)) / sqrt(log(n))
    if mode == "gamma":
        if np.any(t1 == 0):
            raise ConfigError("gamma normalization needs fixed points")
        return n_check / t1 * (hrec - np.log(n_check))
    if mode == "full":
        return (hrec - np.log(n_check)) / (t1 / n_check + np.sqrt(np.log(n_check)))
    raise ConfigError(f"unknown normalization {mode!r}")


def _records_summary(cfg, raw):
    hrec, lrec, t1 = _arr(raw, "hrec"), _arr(raw, "lrec"), _arr(raw, "t1")
    z = standardized_high_records(cfg, hrec, t1)
    alpha = _record_alpha(cfg, int(round(t1.mean())))
    log_n = log(cfg.n)
    summary = {
        "hrec": describe_column(hrec),
        "lrec": describe_column(lrec),
        "z_high": describe_column(z),
        "ks_high": ks_statistic(z, partial(high_record_limit_cdf, alpha)),
        "lrec_var_over_log_n": float(lrec.var(ddof=1) / log_n),
        "lrec_mean_over_log_n": float(lrec.mean() / log_n),
    }
    theory = {
        "alpha": "inf" if alpha is ALPHA_INFINITY else alpha,
        "normalization": cfg.params.get("normalization", "full"),
        "high_limit_mean": high_record_limit_mean(alpha),
    }
    observed = {
        "ks_high": summary["ks_high"],
        "z_mean": summary["z_high"]["mean"],
        "lrec_var_over_log_n": summary["lrec_var_over_log_n"],
        "lrec_mean_over_log_n": summary["lrec_mean_over_log_n"],
    }
    limits = {
        "ks_high": "limit law a N(0,1) + b Gamma(2,1), a = alpha/(alpha+1), b = 1/(alpha+1)",
        "z_mean": f"limit mean {theory['high_limit_mean']:.6g}",
        "lrec_var_over_log_n": "limit 2 when t1 + 2 t2 = n, 1 when t1 + 3 t3 = n (t1 = O(sqrt n))",
        "lrec_mean_over_log_n": "limit 1 when t1 = O(sqrt n)",
    }
    if np.all(t1 >= 1) and np.all(t1 < cfg.n):
        ratio = lrec / (log_n - np.log(t1))
        summary["lrec_first_order"] = float(ratio.mean())
        observed["lrec_first_order"] = summary["lrec_first_order"]
        limits["lrec_first_order"] = "limit 2 when sqrt n << t1 << n"
    return summary, theory, _checks(cfg, observed, limits)


def _records_plot(cfg, raw):
    z = np.sort(standardized_high_records(cfg, _arr(raw, "hrec"), _arr(raw, "t1")))
    alpha = _record_alpha(cfg, int(round(np.mean(raw["t1"]))))
    grid = np.linspace(z[0] - 0.5, z[-1] + 0.5, 121)
    ecdf = np.arange(1, z.size + 1) / z.size
    return polyline_svg(
        [("empirical CDF", z.tolist(), ecdf.tolist()),
         ("limit CDF", grid.tolist(), [high_record_limit_cdf(alpha, x) for x in grid])],
        title=cfg.name, xlabel="standardized high records", ylabel="CDF",
    )


# --- pattern counts ----------------------------------------------------------------------


def _pattern(cfg) -> tuple[int, ...]:
    text = str(cfg.params.get("pattern", "21"))
    p = tuple(int(c) for c in text.replace(",", ""))
    if sorted(p) != list(range(1, len(p) + 1)):
        raise ConfigError(f"bad pattern {text!r}")
    if len(p) > 3:
        raise ConfigError("pattern experiments support r <= 3")
    return p


def _patterns_trial(cfg: ExperimentConfig, trial: int) -> dict:
    from ..stats import pattern_counts

    p = _pattern(cfg)
    rng, t = _trial_setup(cfg, trial)
    y = sample_sequence(t, rng)
    counts = pattern_counts(_ranks(y) + 1, len(p))
    return {"count": int(counts[pattern_rank(p)]), "t1": int(t.fixed_points), "t2": int(t.t(2))}


def _sigma_diag(p, p1, p2) -> float:
    r = len(p)
    i = pattern_rank(p)
    if p1 == 0:
        return float(sigma_matrix_p2(r, p2).entries[i, i])
    if r > SIGMA_EXACT_MAX_R:
        raise ConfigError("exact covariance limited to r <= 3 when fixed points are present")
    return float(sigma_matrix_general(r, p1, p2).entries[i, i])


def _patterns_summary(cfg, raw):
    p = _pattern(cfg)
    r = len(p)
    n = cfg.n
    x = _arr(raw, "count")
    t1, t2 = _arr(raw, "t1"), _arr(raw, "t2")
    total = comb(n, r)
    mus = {v: mu_pattern(p, v / n) for v in np.unique(t1)}
    expected = np.array([mus[v] for v in t1])
    diff = x / total - expected
    se = float(diff.std(ddof=1) / sqrt(diff.size)) if diff.size > 1 else float("inf")
    var = float(x.var(ddof=1)) if x.size > 1 else 0.0
    summary = {
        "count": describe_column(x),
        "mean_over_binomial": float((x / total).mean()),
        "mean_z": float(diff.mean() / se) if se > 0 else 0.0,
        "var_over_n_pow": var / n ** (2 * r - 1),
        "stein_bound_at_empirical_var": stein_bound(n, r, var) if var > 0 else None,
    }
    standardized = (x - x.mean()) / sqrt(var) if var > 0 else np.zeros_like(x)
    summary["ks_normal"] = ks_statistic(standardized, norm.cdf) if var > 0 else 1.0
    theory = {"pattern": "".join(map(str, p)), "mu_at_mean_p1": mu_pattern(p, float(t1.mean()) / n)}
    observed = {"mean_z": abs(summary["mean_z"]), "ks_normal": summary["ks_normal"]}
    limits = {"mean_z": "expectation C(n,r) mu_pi^{p1}", "ks_normal": "standardized counts tend to N(0,1)"}
    fixed_type = not cfg.type_spec.is_random
    if fixed_type:
        p1 = float(t1[0]) / n
        p2 = 2 * float(t2[0]) / n
        sigma = _sigma_diag(p, p1, p2)
        theory.update({"p1": p1, "p2": p2, "sigma_pi_pi": sigma, "expected_mean": total * mu_pattern(p, p1)})
        if sigma > 0:
            summary["var_ratio"] = summary["var_over_n_pow"] / sigma
            observed["var_ratio"] = summary["var_ratio"]
            limits["var_ratio"] = "Var(X_pi) / n^(2r-1) tends to Sigma_{pi,pi}^{p1,p2}"
    return summary, theory, _checks(cfg, observed, limits)


# --- dispatch ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Experiment:
    trial: Callable
    summarize: Callable
    plot: Callable | None = None


EXPERIMENTS = {
    "lds": Experiment(_lds_trial, _lds_summary),
    "shape": Experiment(_shape_trial, _shape_summary, _shape_plot),
    "records": Experiment(_records_trial, _records_summary, _records_plot),
    "patterns": Experiment(_patterns_trial, _patterns_summary),
}


def build_report(kind: str, cfg: ExperimentConfig, columns, raw, with_plot: bool = True) -> ExperimentReport:
    exp = EXPERIMENTS[kind]
    summary, theory, checks = exp.summarize(cfg, raw)
    # every raw column feeds the summary, so any edit to raw.csv is detected on verify
    summary["raw_columns"] = {c: describe_column(raw[c]) for c in columns}
    plot = exp.plot(cfg, raw) if with_plot and exp.plot is not None else None
    return ExperimentReport(kind, cfg, columns, raw, summary, theory, checks, plot)


def run_experiment(kind: str, cfg: ExperimentConfig, threads: int = 1, with_plot: bool = True) -> ExperimentReport:
    if kind not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {kind!r}; expected one of {sorted(EXPERIMENTS)}")
    rows = run_trials(EXPERIMENTS[kind].trial, cfg, threads)
    columns, raw = _table(rows)
    return build_report(kind, cfg, columns, raw, with_plot)


def run_lds_experiment(cfg: ExperimentConfig, threads: int = 1) -> ExperimentReport:
    return run_experiment("lds", cfg, threads)


def run_shape_experiment(cfg: ExperimentConfig, threads: int = 1) -> ExperimentReport:
    return run_experiment("shape", cfg, threads)


def run_records_experiment(cfg: ExperimentConfig, threads: int = 1) -> ExperimentReport:
    return run_experiment("records", cfg, threads)


def run_pattern_experiment(cfg: ExperimentConfig, threads: int = 1) -> ExperimentReport:
    return run_experiment("patterns", cfg, threads)


def verify_report_dir(outdir) -> bool:
    """Recompute ``summary.json`` from ``raw.csv`` and compare byte for byte."""
    with open(os.path.join(outdir, "summary.json")) as fh:
        text = fh.read()
    doc = json.loads(text)
    cfg = ExperimentConfig.from_dict(doc["config"])
    columns, raw = read_raw_csv(os.path.join(outdir, "raw.csv"))
    if len(raw[columns[0]]) != cfg.trials:
        return False
    again = build_report(doc["experiment"], cfg, columns, raw, with_plot=False)
    return again.summary_json() == text
