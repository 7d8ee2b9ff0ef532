"""Reproducible Monte Carlo experiments, property suites and the acceptance runner."""

from .acceptance import AcceptanceReport, CriterionResult, run_all_acceptance
from .config import ConfigError, ExperimentConfig, TypeSpec, load_config
from .experiments import (
    run_experiment,
    run_lds_experiment,
    run_pattern_experiment,
    run_records_experiment,
    run_shape_experiment,
    verify_report_dir,
)
from .properties import PropertyResult, run_properties
from .report import Check, ExperimentReport
from .rng import derive_seed, derive_trial_rng, mix64

__all__ = [
    "AcceptanceReport",
    "Check",
    "ConfigError",
    "CriterionResult",
    "ExperimentConfig",
    "ExperimentReport",
    "PropertyResult",
    "TypeSpec",
    "derive_seed",
    "derive_trial_rng",
    "load_config",
    "mix64",
    "run_all_acceptance",
    "run_experiment",
    "run_lds_experiment",
    "run_pattern_experiment",
    "run_properties",
    "run_records_experiment",
    "run_shape_experiment",
    "verify_report_dir",
]
