"""Numba-compiled twins of ``_numpy``; int64 / float64 inputs only."""

from __future__ import annotations

import numpy as np
from numba import njit

from olg.rng import GAMMA, MIX1, MIX2

_GAMMA = np.uint64(GAMMA)
_MIX1 = np.uint64(MIX1)
_MIX2 = np.uint64(MIX2)


@njit(cache=True)
def _decode(idx, base, digits):
    width = digits.shape[0]
    for j in range(width - 1, -1, -1):
        digits[j] = idx % base
        idx //= base


@njit(cache=True)
def stable_numerators(U, P, n, dpow, start, stop):
    out = np.zeros((stop - start, n), dtype=np.int64)
    dig = np.zeros(n, dtype=np.int64)
    for s in range(start, stop):
        _decode(s, P, dig)
        for i in range(n):
            acc = 0
            for k in range(n):
                acc += dpow[k] * U[dig[(i + k) % n], i]
            out[s - start, i] = acc
    return out


@njit(cache=True)
def lifetime_numerators(U, P, n, T, dpow, start, stop):
    L = n * T
    out = np.zeros((stop - start, n), dtype=np.int64)
    dig = np.zeros(L, dtype=np.int64)
    for s in range(start, stop):
        _decode(s, P, dig)
        for i in range(n):
            acc = 0
            for k in range(L):
                acc += dpow[k] * U[dig[(i * T + k) % L], i]
            out[s - start, i] = acc
    return out


@njit(cache=True)
def age_weight_table(Uf, lam, P, n):
    M = P**n
    out = np.zeros((M, n))
    dig = np.zeros(n, dtype=np.int64)
    for s in range(M):
        _decode(s, P, dig)
        for k in range(n):
            acc = 0.0
            for i in range(n):
                acc += lam[i] * Uf[dig[(i + k) % n], i]
            out[s, k] = acc
    return out


@njit(cache=True)
def grid_argmax(w, grid):
    M, n = w.shape
    G = grid.shape[0]
    arg = np.zeros(G, dtype=np.int64)
    for g in range(G):
        best = -np.inf
        for s in range(M):
            # Horner in the discount variable
            val = 0.0
            for k in range(n - 1, -1, -1):
                val = val * grid[g] + w[s, k]
            if val > best:
                best = val
                arg[g] = s
    return arg


@njit(cache=True)
def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def splitmix_block(seed, start, count):
    out = np.empty(count, dtype=np.uint64)
    base = np.uint64(seed)
    for j in range(count):
        k = np.uint64(start + j + 1)
        out[j] = _mix(base + k * _GAMMA)
    return out


@njit(cache=True)
def sample_draws(cum, denom, trials, seed):
    n = cum.shape[0]
    K = cum.shape[1]
    out = np.empty((trials, n), dtype=np.int64)
    base = np.uint64(seed)
    for t in range(trials):
        for k in range(n):
            z = _mix(base + np.uint64(t * n + k + 1) * _GAMMA)
            r = np.int64(z % np.uint64(denom[k]))
            j = 0
            while j < K - 1 and cum[k, j] <= r:
                j += 1
            out[t, k] = j
    return out
