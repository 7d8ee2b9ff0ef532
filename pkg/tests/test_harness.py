import json
import os
from pathlib import Path

import numpy as np
import pytest

from cyclegeo.cycle_type import from_counts
from cyclegeo.geometry import canonical_permutation, conjugate_uniform_batch
from cyclegeo.harness import acceptance
from cyclegeo.harness.config import ConfigError, ExperimentConfig, TypeSpec, load_config
from cyclegeo.harness.experiments import run_experiment, verify_report_dir
from cyclegeo.harness.properties import check_harness
from cyclegeo.harness.report import bracket_check, read_raw_csv
from cyclegeo.harness.rng import GOLDEN_GAMMA, derive_seed, derive_trial_rng, mix64, trial_state
from cyclegeo.harness.svg import polyline_svg
from cyclegeo.theory import f_lskv, high_record_limit_mean, sigma_matrix_p2

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def _cfg(kind_spec, n, trials, params=None, tolerances=None, seed=7):
    return ExperimentConfig("t", kind_spec, n, trials, seed, params or {}, tolerances or {})


# --- rng -------------------------------------------------------------------------------------


def test_mix64_reference_values():
    # splitmix64 outputs for a zero-initialised state
    assert mix64(GOLDEN_GAMMA) == 0xE220A8397B1DCDAF
    assert mix64(2 * GOLDEN_GAMMA) == 0x6E789E6AA1B965F4
    assert mix64(0) == 0


def test_trial_streams_deterministic_and_distinct():
    a = derive_trial_rng(42, 0).random(100)
    b = derive_trial_rng(42, 0).random(100)
    c = derive_trial_rng(42, 1).random(100)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert trial_state(42, 3) != trial_state(43, 3)
    with pytest.raises(ValueError):
        trial_state(1, -1)


def test_trial_streams_uncorrelated():
    x = derive_trial_rng(9, 0).random(100_000)
    y = derive_trial_rng(9, 1).random(100_000)
    assert abs(np.corrcoef(x, y)[0, 1]) < 0.01


def test_derive_seed_labels():
    assert derive_seed(0, "a") != derive_seed(0, "b")
    assert derive_seed(0, "a") == derive_seed(0, "a")
    assert 0 <= derive_seed(2**64 - 1, "x") < 2**64


# --- config ----------------------------------------------------------------------------------


def test_config_roundtrip():
    cfg = _cfg(TypeSpec("involution", {"alpha": 2.0}), 100, 3, {"x": 1}, {"lis_mean": [1, 2]})
    assert ExperimentConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg
    assert cfg.type_spec.fixed_type(100) == from_counts([20, 40])
    assert cfg.with_seed(5).seed == 5


@pytest.mark.parametrize("doc", [
    {"name": "x", "type_spec": {"kind": "single_cycle"}, "n": 5, "trials": 1, "extra": 1},
    {"name": "x", "type_spec": {"kind": "nope"}, "n": 5, "trials": 1},
    {"name": "x", "type_spec": {"kind": "single_cycle", "params": {"p": 2}}, "n": 5, "trials": 1},
    {"name": "x", "type_spec": {"kind": "single_cycle"}, "n": 5, "trials": 0},
    {"name": "x", "type_spec": {"kind": "single_cycle"}, "n": 0, "trials": 1},
    {"name": "x", "type_spec": {"kind": "single_cycle"}, "n": 5},
    {"name": "x", "type_spec": {"kind": "all_p_cycles", "params": {"p": 3}}, "n": 5, "trials": 1},
    {"name": "x", "type_spec": {"kind": "involution", "params": {"fixed": 2}}, "n": 5, "trials": 1},
    {"name": "x", "type_spec": {"kind": "counts", "params": {"counts": [1, 1]}}, "n": 5, "trials": 1},
    {"name": "x", "type_spec": {"kind": "single_cycle"}, "n": 5, "trials": 1, "tolerances": {"a": [1]}},
    {"name": "x", "type_spec": {"kind": "single_cycle"}, "n": 5, "trials": 1, "seed": -1},
    {"name": "x", "type_spec": "single_cycle", "n": 5, "trials": 1},
    [1, 2],
])
def test_config_rejections(doc):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(doc)


def test_load_config_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_unknown_tolerance_key_rejected():
    cfg = _cfg(TypeSpec("single_cycle"), 50, 2, tolerances={"bogus": 1})
    with pytest.raises(ConfigError):
        run_experiment("lds", cfg)


def test_shipped_configs_match_suite():
    names = sorted(p.stem for p in CONFIG_DIR.glob("*.json"))
    assert names == sorted(acceptance.ACCEPTANCE_CONFIGS)
    for name in names:
        _, cfg = acceptance.acceptance_config(name)
        assert load_config(CONFIG_DIR / f"{name}.json") == cfg


# --- reports ---------------------------------------------------------------------------------


def test_bracket_check_forms():
    assert bracket_check("a", 0.5, [0, 1]).passed
    assert not bracket_check("a", 1.5, [0, 1]).passed
    assert bracket_check("a", 0.5, 1).passed and bracket_check("a", 0.5, 1).low is None
    assert not bracket_check("a", float("nan"), 1).passed
    assert "required" in bracket_check("a", 0.5, [None, 1]).describe()


@pytest.mark.parametrize("kind,spec,n,trials,params,tol", [
    ("lds", TypeSpec("involution", {"fixed": 20}), 400, 6, {}, {"lis_mean": [1.0, 4.0]}),
    ("shape", TypeSpec("ewens", {"theta": 1.0}), 300, 5, {"rescale": True}, {"max_dev": 0.3}),
    ("records", TypeSpec("fixed_plus_cycle", {"fixed": 30}), 2000, 8, {"alpha": "auto"}, {"ks_high": 1.0}),
    ("patterns", TypeSpec("counts", {"counts": [2, 1, 1]}), 7, 30, {"pattern": "132"}, {"var_ratio": [0, 100]}),
])
def test_reports_write_and_verify(tmp_path, kind, spec, n, trials, params, tol):
    cfg = _cfg(spec, n, trials, params, tol)
    report = run_experiment(kind, cfg)
    report.write(tmp_path)
    assert verify_report_dir(tmp_path)
    columns, raw = read_raw_csv(tmp_path / "raw.csv")
    assert columns == report.columns and len(raw[columns[0]]) == trials
    doc = json.loads((tmp_path / "summary.json").read_text())
    assert doc["passed"] == report.passed and doc["config"] == cfg.to_dict()
    if report.plot is not None:
        assert (tmp_path / "plot.svg").read_text().startswith("<svg")

    raw_path = tmp_path / "raw.csv"
    lines = raw_path.read_text().splitlines()
    fields = lines[1].split(",")
    fields[1] = str(float(fields[1]) + 1)
    lines[1] = ",".join(fields)
    raw_path.write_text("\n".join(lines) + "\n")
    assert not verify_report_dir(tmp_path)


def test_determinism_across_workers_and_runs():
    cfg = _cfg(TypeSpec("all_p_cycles", {"p": 3}), 999, 6, {"normalization": "gaussian"})
    one = run_experiment("records", cfg, threads=1)
    two = run_experiment("records", cfg, threads=2)
    again = run_experiment("records", cfg, threads=1)
    assert one.raw_csv() == two.raw_csv() == again.raw_csv()
    assert one.summary_json() == two.summary_json()


def test_theory_references_in_reports():
    shape = run_experiment("shape", _cfg(TypeSpec("all_p_cycles", {"p": 2}), 200, 2, {"r_grid": [0.5, 1.5]}))
    assert shape.theory["f_lskv_r0.5"] == f_lskv(0.5)
    rec = run_experiment("records", _cfg(TypeSpec("involution", {"fixed": 990}), 1000, 3,
                                         {"normalization": "gamma", "alpha": 0}))
    assert rec.theory["high_limit_mean"] == high_record_limit_mean(0) == 2
    pat = run_experiment("patterns", _cfg(TypeSpec("all_p_cycles", {"p": 2}), 40, 4, {"pattern": "21"}))
    assert pat.theory["sigma_pi_pi"] == float(sigma_matrix_p2(2, 1.0).entries[1, 1]) == pytest.approx(2 / 36)


def test_record_normalization_errors():
    cfg = _cfg(TypeSpec("single_cycle"), 100, 2, {"normalization": "gamma"})
    with pytest.raises(ConfigError):
        run_experiment("records", cfg)
    cfg = _cfg(TypeSpec("single_cycle"), 100, 2, {"normalization": "weird"})
    with pytest.raises(ConfigError):
        run_experiment("records", cfg)
    with pytest.raises(ConfigError):
        run_experiment("nope", cfg)


def test_polyline_svg():
    svg = polyline_svg([("a", [0, 1], [0, 1]), ("b & c", [0, 1], [1, 0])], title="t<1>")
    assert svg.startswith("<svg") and "b &amp; c" in svg and "t&lt;1&gt;" in svg
    with pytest.raises(ValueError):
        polyline_svg([])


def test_property_suite():
    results = check_harness(3)
    assert results and all(r.passed for r in results), results


# --- acceptance plumbing ---------------------------------------------------------------------


def _skip_conjugation(t, size, rng):
    # mutation: always the canonical representative instead of a uniform conjugate
    row = canonical_permutation(t).one_line
    return np.tile(row, (size, 1))


def test_mutation_skip_conjugation_fails_uniformity():
    result, _ = acceptance.criterion_1(0, sampler=_skip_conjugation, samples=5000)
    assert not result.passed
    assert any("failing types" in d for d in result.details)


def test_uniformity_criterion_reference_sampler_small():
    result, rows = acceptance.criterion_1(123, sampler=conjugate_uniform_batch, samples=5000)
    assert len(rows) == 29
    assert result.number == 1 and isinstance(result.passed, bool)


def test_cheap_criteria_reproducible():
    first = [acceptance.criterion_11(0), *acceptance.criteria_3_4(0)]
    second = [acceptance.criterion_11(0), *acceptance.criteria_3_4(0)]
    assert [r.to_dict() for r in first] == [r.to_dict() for r in second]
    report = acceptance.AcceptanceReport(0, first)
    assert report.to_json() == acceptance.AcceptanceReport(0, second).to_json()
    assert report.exit_code == (0 if all(r.passed for r in first) else 1)


def test_non_gating_results_do_not_fail_suite():
    ok = acceptance.CriterionResult(1, "x", True)
    info = acceptance.CriterionResult(None, "y", False, gating=False)
    report = acceptance.AcceptanceReport(0, [ok, info])
    assert report.passed and report.exit_code == 0
    assert info.line().startswith("[FAIL] supplementary") and "non-gating" in info.line()
