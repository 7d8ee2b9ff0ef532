"""Backend selection for the hot kernels.

The compiled extension ``cyclegeo._ckernels`` is used when it was built;
otherwise, or when ``CYCLEGEO_PURE_PYTHON=1`` is set, the pure-Python
module ``cyclegeo._pykernels`` is used. Both expose the same functions.
"""

import os

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

if _ckernels is not None and not os.environ.get("CYCLEGEO_PURE_PYTHON"):
    _impl = _ckernels
    BACKEND = "cython"
else:
    _impl = _pykernels
    BACKEND = "python"


def available_backends():
    names = ["python"]
    if _ckernels is not None:
        names.insert(0, "cython")
    return names


def get_backend(name=None):
    """Return the kernel module called ``name`` (default: the active one)."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("cyclegeo._ckernels was not built")
        return _ckernels
    raise ValueError(f"unknown kernel backend {name!r}")


def _as_int64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def _as_numeric(a):
    a = np.asarray(a)
    if a.dtype.kind == "f":
        return np.ascontiguousarray(a, dtype=np.float64)
    return np.ascontiguousarray(a, dtype=np.int64)


def lis_length(a):
    return _impl.lis_length(_as_numeric(a))


def rs_shape(a):
    return _impl.rs_shape(_as_numeric(a))


def count_inversions(a):
    return _impl.count_inversions(_as_int64(a))


def left_smaller_counts(a):
    return _impl.left_smaller_counts(_as_int64(a))


def records(a):
    return _impl.records(_as_numeric(a))


def pattern_counts(a, r):
    return _impl.pattern_counts(_as_int64(a), int(r))


def cycle_lengths(a):
    return _impl.cycle_lengths(_as_int64(a))
