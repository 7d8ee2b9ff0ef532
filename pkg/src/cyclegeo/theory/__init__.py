"""Limit objects: the limit shape functional, pattern laws, covariance matrices, bounds."""

from .bounds import janson_ld_bound, stein_bound
from .limit_shape import f_lskv, f_lskv_grid, vkls_omega
from .linalg import DEFAULT_RANK_TOL, matrix_rank, rational_rank, singular_values
from .patterns import (
    MCEstimate,
    PatternLawContext,
    mu_monte_carlo,
    mu_pattern,
    mu_pattern_exact,
    mu_vector_exact,
    psi_closed_form,
    psi_monte_carlo,
)
from .records import ALPHA_INFINITY, gamma2_cdf, high_record_limit_cdf, high_record_limit_mean
from .sigma import (
    SigmaMatrix,
    a_matrix,
    a_span_dimensions,
    covariance_blocks,
    psi_exact,
    sigma_matrix_general,
    sigma_matrix_p2,
)

__all__ = [
    "ALPHA_INFINITY",
    "DEFAULT_RANK_TOL",
    "MCEstimate",
    "PatternLawContext",
    "SigmaMatrix",
    "a_matrix",
    "a_span_dimensions",
    "covariance_blocks",
    "f_lskv",
    "f_lskv_grid",
    "gamma2_cdf",
    "high_record_limit_cdf",
    "high_record_limit_mean",
    "janson_ld_bound",
    "matrix_rank",
    "mu_monte_carlo",
    "mu_pattern",
    "mu_pattern_exact",
    "mu_vector_exact",
    "psi_closed_form",
    "psi_exact",
    "psi_monte_carlo",
    "rational_rank",
    "sigma_matrix_general",
    "sigma_matrix_p2",
    "singular_values",
    "stein_bound",
    "vkls_omega",
]
