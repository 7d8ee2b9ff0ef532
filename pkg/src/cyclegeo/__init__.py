"""Uniform random permutations of a prescribed cycle type from planar point sets."""

from .cycle_type import (
    CycleType,
    all_p_cycles,
    enumerate_cycle_types,
    ewens_type,
    fixed_plus_cycle,
    from_counts,
    involution_type,
    parse_counts,
    remove_fixed_points,
)
from .geometry import Permutation, PointSet, cycle_type_of, sample_point_set, sample_t_cyclic
from .kernels import BACKEND
from .stats import lds, lds_k, lis, pattern_count, pattern_counts, records, rs_shape

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CycleType",
    "Permutation",
    "PointSet",
    "all_p_cycles",
    "cycle_type_of",
    "enumerate_cycle_types",
    "ewens_type",
    "fixed_plus_cycle",
    "from_counts",
    "involution_type",
    "lds",
    "lds_k",
    "lis",
    "parse_counts",
    "pattern_count",
    "pattern_counts",
    "records",
    "remove_fixed_points",
    "rs_shape",
    "sample_point_set",
    "sample_t_cyclic",
]
