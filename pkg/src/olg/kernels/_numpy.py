"""Pure-numpy implementations of the hot loops.

Every function here has a numba twin in ``_numba`` with the same
signature and bit-identical output.  These versions also accept
object-dtype arrays of Python ints, which is how exact results are kept
when int64 would overflow.
"""

from __future__ import annotations

import numpy as np

from olg.rng import GAMMA, MIX1, MIX2

_CHUNK = 1 << 15


def _digits(start, stop, base, width):
    idx = np.arange(start, stop, dtype=np.int64)
    powers = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % base


def stable_numerators(U, P, n, dpow, start, stop):
    dtype = U.dtype if U.dtype == object else np.int64
    out = np.zeros((stop - start, n), dtype=dtype)
    players = np.arange(n)
    for lo in range(start, stop, _CHUNK):
        hi = min(stop, lo + _CHUNK)
        dig = _digits(lo, hi, P, n)
        acc = np.zeros((hi - lo, n), dtype=dtype)
        for k in range(n):
            cols = (players + k) % n
            acc += dpow[k] * U[dig[:, cols], players]
        out[lo - start:hi - start] = acc
    return out


def lifetime_numerators(U, P, n, T, dpow, start, stop):
    L = n * T
    dtype = U.dtype if U.dtype == object else np.int64
    out = np.zeros((stop - start, n), dtype=dtype)
    players = np.arange(n)
    for lo in range(start, stop, _CHUNK):
        hi = min(stop, lo + _CHUNK)
        dig = _digits(lo, hi, P, L)
        acc = np.zeros((hi - lo, n), dtype=dtype)
        for k in range(L):
            periods = (players * T + k) % L
            acc += dpow[k] * U[dig[:, periods], players]
        out[lo - start:hi - start] = acc
    return out


def age_weight_table(Uf, lam, P, n):
    M = P**n
    out = np.zeros((M, n))
    players = np.arange(n)
    for lo in range(0, M, _CHUNK):
        hi = min(M, lo + _CHUNK)
        dig = _digits(lo, hi, P, n)
        for k in range(n):
            cols = (players + k) % n
            out[lo:hi, k] = (Uf[dig[:, cols], players] * lam).sum(axis=1)
    return out


def grid_argmax(w, grid):
    n = w.shape[1]
    pw = grid[None, :] ** np.arange(n)[:, None]
    best = np.full(len(grid), -np.inf)
    arg = np.zeros(len(grid), dtype=np.int64)
    for lo in range(0, w.shape[0], _CHUNK):
        vals = w[lo:lo + _CHUNK] @ pw
        j = np.argmax(vals, axis=0)
        top = vals[j, np.arange(len(grid))]
        better = top > best
        best[better] = top[better]
        arg[better] = j[better] + lo
    return arg


def splitmix_block(seed, start, count):
    k = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed) + k * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


def sample_draws(cum, denom, trials, seed):
    n = cum.shape[0]
    z = splitmix_block(seed, 0, trials * n).reshape(trials, n)
    out = np.empty((trials, n), dtype=np.int64)
    for k in range(n):
        r = (z[:, k] % np.uint64(denom[k])).astype(np.int64)
        out[:, k] = np.searchsorted(cum[k], r, side="right")
    return out
