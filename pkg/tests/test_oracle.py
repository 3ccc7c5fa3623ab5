from __future__ import annotations

from fractions import Fraction

import pytest

from olg import oracle
from olg.feasible import EnumerationCapError, effective_discount, feasible_set, lifetime_payoff, stable_payoff
from olg.geometry import hull_equal
from olg.oracle import (
    PrdLottery,
    enumerate_lifetime_hull,
    nonperiodic_counterexample,
    prd_expected_payoff,
    prd_lottery,
    prd_simulate,
    random_lifetime_sequence,
    theorem1_equivalence,
)
from olg.rng import derive_seed
from olg.stage_game import BUNDLED_GAMES, load_bundled

from conftest import prof

F = Fraction


def test_lifetime_hull_examples(pd, coord):
    assert enumerate_lifetime_hull(pd, effective_discount(F(1, 2), 1)).vertices == feasible_set(pd, F(1, 2)).vertices
    assert hull_equal(enumerate_lifetime_hull(pd, effective_discount(F(1, 2), 2)), feasible_set(pd, F(1, 4)))
    assert hull_equal(enumerate_lifetime_hull(coord, effective_discount(F(1, 2), 1)), feasible_set(coord, F(1, 2)))


def test_theorem1_examples(pd, coord):
    assert theorem1_equivalence(pd, effective_discount(F(1, 2), 2))
    assert theorem1_equivalence(pd, effective_discount(F(9, 10), 1))
    assert theorem1_equivalence(coord, effective_discount(F(2, 3), 2))


@pytest.mark.parametrize("name", BUNDLED_GAMES)
def test_theorem1_grid(name):
    g = load_bundled(name)
    for delta in (F(1, 4), F(1, 2), F(2, 3), F(9, 10)):
        for T in (1, 2, 3):
            if g.num_profiles ** (g.n * T) > 10**6:
                continue
            assert theorem1_equivalence(g, effective_discount(delta, T)), (delta, T)


def test_cap(pd, monkeypatch):
    monkeypatch.setenv("OLG_ENUM_CAP", "100")
    with pytest.raises(EnumerationCapError):
        enumerate_lifetime_hull(pd, effective_discount(F(1, 2), 2))


def test_lottery_examples(pd):
    spec = effective_discount(F(1, 2), 2)
    lot = prd_lottery(prof(pd, "CC", "DD", "DD", "DD"), spec)
    assert lot.distribution(0) == {pd.profile_by_label("CC"): F(2, 3), pd.profile_by_label("DD"): F(1, 3)}
    assert lot.distribution(1) == {pd.profile_by_label("DD"): 1}
    lot1 = prd_lottery(prof(pd, "CD", "DC"), effective_discount(F(1, 3), 1))
    assert [len(d) for d in lot1.per_overlap] == [1, 1]
    with pytest.raises(ValueError):
        prd_lottery(prof(pd, "CC", "DD", "CD"), spec)


def test_lottery_validation():
    with pytest.raises(ValueError):
        PrdLottery((( ((0, 0), F(1, 2)), ),))
    with pytest.raises(ValueError):
        PrdLottery((( ((0, 0), F(3, 2)), ((0, 1), F(-1, 2)) ),))
    with pytest.raises(ValueError):
        PrdLottery(((),))


def test_expected_payoff_examples(pd):
    spec = effective_discount(F(1, 2), 2)
    seq = prof(pd, "CC", "DD", "CD", "DC")
    assert prd_expected_payoff(pd, prd_lottery(seq, spec), spec) == lifetime_payoff(pd, seq, spec)
    const = PrdLottery.from_dicts([{pd.profile_by_label("DC"): 1}] * 2)
    assert prd_expected_payoff(pd, const, spec) == (2, -1)
    cc, dd = pd.profile_by_label("CC"), pd.profile_by_label("DD")
    lot = PrdLottery.from_dicts([{cc: F(1, 2), dd: F(1, 2)}, {cc: 1}])
    unit = effective_discount(1, 1)
    expected = tuple((a + b) / 2 for a, b in zip(stable_payoff(pd, (cc, cc), 1), stable_payoff(pd, (dd, cc), 1)))
    assert prd_expected_payoff(pd, lot, unit) == expected


@pytest.mark.parametrize("name", BUNDLED_GAMES)
def test_lottery_identity_random(name):
    g = load_bundled(name)
    for T in (1, 2, 3):
        spec = effective_discount(F(2, 3), T)
        for k in range(30):
            seq = random_lifetime_sequence(g, T, derive_seed(5, k))
            lot = prd_lottery(seq, spec)
            assert all(sum(p for _, p in d) == 1 for d in lot.per_overlap)
            assert prd_expected_payoff(g, lot, spec) == lifetime_payoff(g, seq, spec)


def test_simulation(pd):
    spec = effective_discount(F(1, 2), 2)
    lot = prd_lottery(prof(pd, "CC", "DD", "CD", "DC"), spec)
    res = prd_simulate(pd, lot, spec, seed=1, trials=10**5)
    exact = prd_expected_payoff(pd, lot, spec)
    for m, e, se in zip(res.mean, exact, res.stderr):
        assert se > 0
        assert abs(float(m - e)) <= 4 * se
    assert prd_simulate(pd, lot, spec, seed=1, trials=10**5) == res
    assert prd_simulate(pd, lot, spec, seed=2, trials=1000) != prd_simulate(pd, lot, spec, seed=3, trials=1000)


def test_simulation_degenerate(pd):
    spec = effective_discount(F(1, 2), 2)
    lot = prd_lottery(prof(pd, "DC", "DC", "CD", "CD"), spec)
    res = prd_simulate(pd, lot, spec, seed=9, trials=500)
    assert res.mean == prd_expected_payoff(pd, lot, spec)
    assert res.stderr == (0.0, 0.0)
    assert prd_simulate(pd, lot, spec, seed=9, trials=1).stderr == (0.0, 0.0)
    with pytest.raises(ValueError):
        prd_simulate(pd, lot, spec, seed=9, trials=0)


def test_random_sequence_deterministic(pd):
    a = random_lifetime_sequence(pd, 3, 42)
    assert len(a) == 6 and a == random_lifetime_sequence(pd, 3, 42)
    assert a != random_lifetime_sequence(pd, 3, 43)


def test_nonperiodic_counterexample():
    rep = nonperiodic_counterexample(F(9, 10), F(1, 2))
    assert rep.target_player1 == 1
    assert rep.target_player2 == F(9, 19)
    assert rep.best_player2_under_prime == F(1, 3) == rep.brute_force_best
    assert rep.infeasible_under_prime
    rep = nonperiodic_counterexample(F(1, 2), F(1, 4))
    assert (rep.target_player2, rep.best_player2_under_prime) == (F(1, 3), F(1, 5))
    for bad in [(F(1, 2), F(1, 2)), (F(1, 4), F(1, 2)), (1, F(1, 2)), (F(1, 2), 0)]:
        with pytest.raises(ValueError):
            nonperiodic_counterexample(*bad)


def test_oracle_independent_of_stable_path(pd):
    # the oracle's own period-by-period value agrees with the feasible module's
    spec = effective_discount(F(3, 4), 2)
    for k in range(20):
        seq = random_lifetime_sequence(pd, 2, k)
        assert oracle._lifetime_value(pd, seq, spec.delta, spec.T) == lifetime_payoff(pd, seq, spec)
