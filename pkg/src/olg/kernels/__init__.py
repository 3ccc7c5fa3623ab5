"""Hot enumeration and sampling loops.

The numba path is used when numba imports and ``OLG_DISABLE_NUMBA`` is not
set to a true value; otherwise the pure-numpy path runs.  Object-dtype
inputs (exact arithmetic past int64 range) always take the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

from olg.kernels import _numpy

_disabled = os.environ.get("OLG_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _disabled:
        raise ImportError("disabled by OLG_DISABLE_NUMBA")
    from olg.kernels import _numba
except ImportError:
    _numba = None

BACKEND = "numba" if _numba is not None else "numpy"

# headroom so sums of n products stay inside int64
INT64_SAFE = 2**62


def _pick(*arrays):
    if _numba is None or any(a.dtype == object for a in arrays):
        return _numpy
    return _numba


def stable_numerators(U, dpow, start, stop):
    P, n = U.shape
    return _pick(U, dpow).stable_numerators(U, P, n, dpow, start, stop)


def lifetime_numerators(U, T, dpow, start, stop):
    P, n = U.shape
    return _pick(U, dpow).lifetime_numerators(U, P, n, T, dpow, start, stop)


def age_weight_table(Uf, lam):
    P, n = Uf.shape
    return _pick(Uf).age_weight_table(np.asarray(Uf, dtype=np.float64), np.asarray(lam, dtype=np.float64), P, n)


def grid_argmax(w, grid):
    return _pick(w).grid_argmax(np.ascontiguousarray(w, dtype=np.float64), np.asarray(grid, dtype=np.float64))


def splitmix_block(seed, start, count):
    return _pick().splitmix_block(np.uint64(seed & (2**64 - 1)), start, count)


def sample_draws(cum, denom, trials, seed):
    return _pick(cum).sample_draws(cum, denom, trials, np.uint64(seed & (2**64 - 1)))


def weights_array(values):
    """int64 array when every value fits comfortably, else object."""
    if all(abs(v) < INT64_SAFE for v in values):
        return np.array(values, dtype=np.int64)
    return np.array(values, dtype=object)


def exact_fits(U, weights) -> bool:
    """True when ``sum_k weights[k] * U`` cannot overflow int64."""
    if U.dtype == object or weights.dtype == object:
        return False
    bound = int(np.abs(U).max(initial=0)) * sum(abs(int(w)) for w in weights)
    return bound < INT64_SAFE
