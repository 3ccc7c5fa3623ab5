from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from olg.feasible import (
    EnumerationCapError,
    age_weights,
    effective_discount,
    feasible_set,
    lifetime_payoff,
    max_welfare,
    stable_payoff,
    stable_table,
    stretch,
    vertex_generators,
    welfare,
)
from olg.geometry import hull_contains, hull_equal, support_value
from olg.oracle import _lifetime_value
from olg.stage_game import BUNDLED_GAMES, StageGame, load_bundled, one_shot_hull, payoff_cube

from conftest import prof

F = Fraction


def test_effective_discount():
    assert effective_discount(F(1, 2), 1).Delta == F(1, 2)
    assert effective_discount(F(1, 2), 2).Delta == F(1, 4)
    assert effective_discount(F(9, 10), 3).Delta == F(729, 1000)
    for bad in [(0, 1), (F(3, 2), 1), (F(1, 2), 0), (-1, 2)]:
        with pytest.raises(ValueError):
            effective_discount(*bad)


def test_stable_payoff_examples(pd):
    assert stable_payoff(pd, prof(pd, "CC", "CC"), F(3, 7)) == (1, 1)
    assert stable_payoff(pd, prof(pd, "DC", "CD"), F(1, 3)) == (F(5, 4), F(5, 4))
    assert stable_payoff(pd, prof(pd, "DC", "CD"), F(2, 3)) == (F(4, 5), F(4, 5))
    for bad in (0, F(3, 2)):
        with pytest.raises(ValueError):
            stable_payoff(pd, prof(pd, "CC", "CC"), bad)
    with pytest.raises(ValueError):
        stable_payoff(pd, prof(pd, "CC"), F(1, 2))


def test_lifetime_payoff_examples(pd):
    assert lifetime_payoff(pd, prof(pd, "DC", "CD"), effective_discount(F(1, 3), 1)) == (F(5, 4), F(5, 4))
    # T = 2 with delta**2 = 1/3 is irrational; use the stretch identity at a rational delta instead
    spec = effective_discount(F(1, 2), 2)
    seq = prof(pd, "DC", "DC", "CD", "CD")
    assert lifetime_payoff(pd, seq, spec) == stable_payoff(pd, prof(pd, "DC", "CD"), F(1, 4))
    const = prof(pd, "CD", "CD", "CD", "CD")
    assert lifetime_payoff(pd, const, spec) == (-1, 2)
    with pytest.raises(ValueError):
        lifetime_payoff(pd, prof(pd, "CC"), spec)


def test_feasible_set_examples(pd, coord):
    assert hull_equal(feasible_set(pd, 1), one_shot_hull(pd))
    F13 = feasible_set(pd, F(1, 3))
    assert (F(5, 4), F(5, 4)) in F13.vertices
    assert set(feasible_set(coord, 1).vertices) == {(0, 0, 0), (1, 1, 1)}
    for bad in (0, F(5, 4)):
        with pytest.raises(ValueError):
            feasible_set(pd, bad)


def test_vertex_generators(pd):
    gens = vertex_generators(pd, F(1, 3))
    assert gens[(F(5, 4), F(5, 4))] == prof(pd, "DC", "CD")
    gens = vertex_generators(pd, F(2, 3))
    assert gens[(1, 1)] == prof(pd, "CC", "CC")
    for v, s in gens.items():
        assert stable_payoff(pd, s, F(2, 3)) == v


def test_welfare_examples(pd):
    assert welfare(pd, prof(pd, "CC", "CC"), F(1, 5), (1, 1)) == 2
    assert welfare(pd, prof(pd, "DC", "CD"), F(1, 3), (1, 1)) == F(5, 2)
    assert welfare(pd, prof(pd, "DC", "CD"), F(2, 3), (1, 1)) == F(8, 5)
    with pytest.raises(ValueError):
        welfare(pd, prof(pd, "CC", "CC"), F(1, 2), (0, 0))
    with pytest.raises(ValueError):
        welfare(pd, prof(pd, "CC", "CC"), F(1, 2), (1, 1, 1))


def test_max_welfare_examples(pd, bundled):
    rec = max_welfare(pd, F(2, 3), (1, 1))
    assert rec.value == 2 and prof(pd, "CC", "CC") in rec.optimizers
    rec = max_welfare(pd, F(1, 3), (1, 1))
    assert rec.value == F(5, 2) and prof(pd, "DC", "CD") in rec.optimizers
    assert list(rec.optimizers) == sorted(rec.optimizers)
    for g in bundled.values():
        for lam in itertools.product((-1, 0, 2), repeat=g.n):
            if any(lam):
                assert max_welfare(g, 1, lam).value == support_value(one_shot_hull(g), lam)


def test_age_weights_examples(pd):
    u = [(F(1), F(2), F(3)), (F(4), F(5), F(6)), (F(7), F(8), F(9))]
    w = age_weights(u, (1, 1, 1))
    assert w == (1 + 5 + 9, 4 + 8 + 3, 7 + 2 + 6)
    assert age_weights([(2, -1), (-1, 2)], (1, 1)) == (4, -2)
    assert age_weights([(3, 4), (3, 4)], (2, 1)) == (10, 10)
    with pytest.raises(ValueError):
        age_weights([(1, 1)], (1, 1))


def test_enumeration_cap(pd, monkeypatch):
    feasible_set(pd, F(1, 7))
    monkeypatch.setenv("OLG_ENUM_CAP", "10")
    # already cached, still refused
    with pytest.raises(EnumerationCapError):
        feasible_set(pd, F(1, 7))
    with pytest.raises(EnumerationCapError):
        stable_table(pd, F(1, 7))
    monkeypatch.delenv("OLG_ENUM_CAP")
    assert len(feasible_set(pd, F(1, 7))) > 4


def test_large_denominators_use_exact_objects(pd):
    Delta = F(10**19 - 1, 10**19)
    table = stable_table(pd, Delta)
    assert table.num.dtype == object
    for s in range(table.P ** table.n):
        assert table.point(s) == stable_payoff(pd, tuple(pd.profiles[d] for d in table.sequence(s)), Delta)


# -- properties ----------------------------------------------------------------

deltas = st.fractions(min_value=F(1, 40), max_value=1, max_denominator=40)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(BUNDLED_GAMES), deltas, st.integers(0, 10**6))
def test_rotation_and_eq3(name, Delta, pick):
    g = load_bundled(name)
    n = g.n
    s = tuple(g.profiles[(pick // (k + 1)) % g.num_profiles] for k in range(n))
    v = stable_payoff(g, s, Delta)
    for i in range(n):
        rot = s[i:] + s[:i]
        # the first-overlap formula on the sequence rotated left by i, read in i's coordinate
        weights = [Delta**k for k in range(n)]
        direct = sum(w * g.payoffs[g.profile_index(rot[k])][i] for k, w in enumerate(weights)) / sum(weights)
        assert direct == v[i]
    lam = tuple(F(k + 1, 2) * (-1) ** k for k in range(n))
    w = age_weights([g.payoffs[g.profile_index(a)] for a in s], lam)
    W = sum(Delta**k * w[k] for k in range(n)) / sum(Delta**k for k in range(n))
    assert W == welfare(g, s, Delta, lam)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(BUNDLED_GAMES), st.fractions(min_value=F(1, 20), max_value=1, max_denominator=20),
       st.integers(1, 3), st.integers(0, 10**6))
def test_stretch_identity(name, delta, T, pick):
    if delta <= 0:
        return
    g = load_bundled(name)
    s = tuple(g.profiles[(pick * (k + 3)) % g.num_profiles] for k in range(g.n))
    spec = effective_discount(delta, T)
    assert lifetime_payoff(g, stretch(s, T), spec) == stable_payoff(g, s, spec.Delta)
    assert _lifetime_value(g, stretch(s, T), spec.delta, T) == stable_payoff(g, s, spec.Delta)


@pytest.mark.parametrize("name", BUNDLED_GAMES)
def test_v_sandwiched(name):
    g = load_bundled(name)
    V, cube = one_shot_hull(g), payoff_cube(g)
    for Delta in (F(1, 10), F(1, 2), F(9, 10), 1):
        Fd = feasible_set(g, Delta)
        assert hull_contains(Fd, V)
        assert hull_contains(cube, Fd)


@pytest.mark.parametrize("name", BUNDLED_GAMES)
def test_support_equals_max_welfare_and_scaling(name):
    g = load_bundled(name)
    for Delta in (F(1, 4), F(2, 3)):
        Fd = feasible_set(g, Delta)
        for lam in itertools.product((-1, 1, 3), repeat=g.n):
            rec = max_welfare(g, Delta, lam)
            assert rec.value == support_value(Fd, lam)
            scaled = max_welfare(g, Delta, tuple(F(5, 2) * x for x in lam))
            assert scaled.optimizers == rec.optimizers
            assert scaled.value == F(5, 2) * rec.value
            for s in rec.optimizers:
                assert welfare(g, s, Delta, lam) == rec.value
            useqs = {tuple(g.payoffs[g.profile_index(a)] for a in s) for s in rec.optimizers}
            assert set(rec.optimizer_payoff_sequences) == useqs


def test_rational_payoffs_game():
    g = StageGame((("a", "b"), ("c", "d")),
                  ((F(1, 3), F(2, 7)), (F(-5, 9), F(1)), (F(0), F(3, 11)), (F(7, 4), F(-1, 6))))
    Delta = F(3, 5)
    pts = {stable_payoff(g, s, Delta) for s in itertools.product(g.profiles, repeat=2)}
    from olg.geometry import Polytope
    assert hull_equal(feasible_set(g, Delta), Polytope.from_points(pts))
