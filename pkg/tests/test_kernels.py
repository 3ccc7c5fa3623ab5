"""The numba and numpy backends must agree exactly."""

from __future__ import annotations

import numpy as np
import pytest

from olg import kernels
from olg.kernels import _numpy
from olg.rng import SplitMix64

_numba = pytest.importorskip("olg.kernels._numba")


def random_U(rng, P, n, lo=-20, hi=20):
    return rng.integers(lo, hi, size=(P, n)).astype(np.int64)


@pytest.mark.parametrize("P,n", [(4, 2), (8, 3), (3, 4), (2, 5)])
def test_stable_numerators_agree(P, n):
    rng = np.random.default_rng(P * 10 + n)
    U = random_U(rng, P, n)
    dpow = np.array([3**k * 5 ** (n - 1 - k) for k in range(n)], dtype=np.int64)
    M = P**n
    a = _numba.stable_numerators(U, P, n, dpow, 0, M)
    b = _numpy.stable_numerators(U, P, n, dpow, 0, M)
    assert np.array_equal(a, b)
    # sub-ranges line up with the full table
    assert np.array_equal(_numba.stable_numerators(U, P, n, dpow, 3, M - 1), a[3:M - 1])


def test_stable_numerators_brute_force():
    P, n = 3, 3
    U = random_U(np.random.default_rng(1), P, n)
    dpow = np.array([4, 2, 1], dtype=np.int64)
    out = kernels.stable_numerators(U, dpow, 0, P**n)
    for s in range(P**n):
        digits = [(s // P**(n - 1 - j)) % P for j in range(n)]
        for i in range(n):
            assert out[s, i] == sum(dpow[k] * U[digits[(i + k) % n], i] for k in range(n))


@pytest.mark.parametrize("P,n,T", [(4, 2, 2), (4, 2, 3), (8, 3, 2)])
def test_lifetime_numerators_agree(P, n, T):
    rng = np.random.default_rng(P + n + T)
    U = random_U(rng, P, n)
    L = n * T
    dpow = np.array([2**k * 3 ** (L - 1 - k) for k in range(L)], dtype=np.int64)
    M = min(P**L, 5000)
    assert np.array_equal(
        _numba.lifetime_numerators(U, P, n, T, dpow, 0, M),
        _numpy.lifetime_numerators(U, P, n, T, dpow, 0, M),
    )


def test_object_dtype_path_is_exact():
    P, n = 4, 2
    U = np.array([[10**15, -(10**15)], [1, 2], [3, 4], [5, 6]], dtype=object)
    dpow = np.array([10**10, 1], dtype=object)
    out = kernels.stable_numerators(U, dpow, 0, P**n)
    assert out.dtype == object
    assert out[0, 0] == 10**25 + 10**15


def test_age_weights_and_grid_argmax_agree():
    P, n = 4, 3
    Uf = np.random.default_rng(5).normal(size=(P, n))
    lam = np.array([1.0, -0.5, 2.0])
    wa = _numba.age_weight_table(Uf, lam, P, n)
    wb = _numpy.age_weight_table(Uf, lam, P, n)
    assert np.allclose(wa, wb, rtol=0, atol=1e-12)
    grid = np.linspace(0.01, 1, 50)
    assert np.array_equal(_numba.grid_argmax(wa, grid), _numpy.grid_argmax(wa, grid))


def test_splitmix_block_matches_reference():
    rng = SplitMix64(42)
    ref = [rng.next() for _ in range(10)]
    a = _numba.splitmix_block(42, 0, 10)
    b = _numpy.splitmix_block(42, 0, 10)
    assert [int(x) for x in a] == ref == [int(x) for x in b]
    assert [int(x) for x in _numpy.splitmix_block(42, 4, 3)] == ref[4:7]


def test_sample_draws_agree():
    cum = np.array([[2, 3, 3], [1, 2, 4]], dtype=np.int64)
    denom = np.array([3, 4], dtype=np.int64)
    a = _numba.sample_draws(cum, denom, 1000, 17)
    b = _numpy.sample_draws(cum, denom, 1000, 17)
    assert np.array_equal(a, b)
    assert a[:, 0].max() <= 1 and a[:, 1].max() <= 2


def test_exact_fits():
    U = np.array([[2**40]], dtype=np.int64)
    assert kernels.exact_fits(U, np.array([2**20], dtype=np.int64))
    assert not kernels.exact_fits(U, np.array([2**23], dtype=np.int64))
    assert kernels.weights_array([2**70]).dtype == object


@pytest.mark.parametrize("seed", [2**63, 2**64 - 1, -1])
def test_high_seeds(seed):
    cum = np.array([[1, 2]], dtype=np.int64)
    denom = np.array([2], dtype=np.int64)
    a = kernels.sample_draws(cum, denom, 50, seed)
    b = _numpy.sample_draws(cum, denom, 50, np.uint64(seed & (2**64 - 1)))
    assert np.array_equal(a, b)
    rng = SplitMix64(seed)
    assert [int(x) for x in kernels.splitmix_block(seed, 0, 3)] == [rng.next() for _ in range(3)]
