"""Brute-force verification of the feasible set.

Nothing here goes through the stable-sequence machinery in
:mod:`olg.feasible`.  Lifetime payoffs are evaluated period by period from
their definition, the lifetime hull is built from every sequence in
``A**(nT)``, and the per-overlap lotteries that turn a lifetime sequence into
a mixture of stable sequences are constructed and checked both exactly and
by simulation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from olg import kernels
from olg.feasible import DiscountSpec, LifetimeSequence, StableSequence, check_cap, feasible_set, unique_rows
from olg.geometry import Polytope, hull_equal
from olg.rng import SplitMix64
from olg.stage_game import ActionProfile, PayoffVector, StageGame


def _lifetime_value(g: StageGame, seq: LifetimeSequence, delta: Fraction, T: int) -> PayoffVector:
    # player i is born at period i*T (0-based) and lives n*T periods, wrapping around
    L = g.n * T
    if len(seq) != L:
        raise ValueError(f"lifetime sequence has {len(seq)} profiles, expected {L}")
    weights = [delta**t for t in range(L)]
    total = sum(weights)
    out = []
    for i in range(g.n):
        acc = Fraction(0)
        for t in range(L):
            acc += weights[t] * g.payoffs[g.profile_index(seq[(i * T + t) % L])][i]
        out.append(acc / total)
    return tuple(out)


def _stable_value(g: StageGame, s: StableSequence, Delta: Fraction) -> PayoffVector:
    n = g.n
    weights = [Delta**k for k in range(n)]
    total = sum(weights)
    return tuple(
        sum(weights[k] * g.payoffs[g.profile_index(s[(i + k) % n])][i] for k in range(n)) / total
        for i in range(n)
    )


# -- lifetime enumeration ------------------------------------------------------


def enumerate_lifetime_hull(g: StageGame, spec: DiscountSpec) -> Polytope:
    """Hull of lifetime payoffs over every sequence of ``n*T`` action profiles."""
    n, P, T = g.n, g.num_profiles, spec.T
    L = n * T
    M = P**L
    check_cap(M, "lifetime sequences")
    p, q = spec.delta.numerator, spec.delta.denominator
    w = [p**t * q ** (L - 1 - t) for t in range(L)]
    U, D = g.integer_payoffs
    dpow = kernels.weights_array(w)
    if not kernels.exact_fits(U, dpow):
        U, dpow = U.astype(object), dpow.astype(object)
    num = kernels.lifetime_numerators(U, T, dpow, 0, M)
    rows, _ = unique_rows(num)
    return Polytope.from_scaled(rows, D * sum(w))


def theorem1_equivalence(g: StageGame, spec: DiscountSpec) -> bool:
    """Does the lifetime hull coincide with the stable-sequence hull at ``delta**T``?"""
    return hull_equal(enumerate_lifetime_hull(g, spec), feasible_set(g, spec.Delta))


# -- lotteries -----------------------------------------------------------------


@dataclass(frozen=True)
class PrdLottery:
    """One distribution over action profiles per overlap, sorted by profile."""

    per_overlap: tuple[tuple[tuple[ActionProfile, Fraction], ...], ...]

    def __post_init__(self):
        for k, dist in enumerate(self.per_overlap):
            if not dist:
                raise ValueError(f"overlap {k + 1} has an empty distribution")
            if any(pr < 0 for _, pr in dist):
                raise ValueError(f"overlap {k + 1} has a negative probability")
            if sum(pr for _, pr in dist) != 1:
                raise ValueError(f"overlap {k + 1} probabilities do not sum to 1")

    @classmethod
    def from_dicts(cls, dists: Sequence[Mapping[ActionProfile, object]]) -> PrdLottery:
        return cls(tuple(
            tuple(sorted((tuple(a), Fraction(pr)) for a, pr in d.items() if Fraction(pr) != 0))
            for d in dists
        ))

    @property
    def n(self) -> int:
        return len(self.per_overlap)

    def distribution(self, k: int) -> dict[ActionProfile, Fraction]:
        return dict(self.per_overlap[k])


def prd_lottery(seq: LifetimeSequence, spec: DiscountSpec) -> PrdLottery:
    """Within each overlap, weight each period by its discount relative to the overlap start."""
    T = spec.T
    if len(seq) % T:
        raise ValueError(f"sequence length {len(seq)} is not a multiple of T={T}")
    weights = [spec.delta**j for j in range(T)]
    total = sum(weights)
    dists = []
    for k in range(len(seq) // T):
        d: dict[ActionProfile, Fraction] = {}
        for j in range(T):
            a = tuple(seq[k * T + j])
            d[a] = d.get(a, Fraction(0)) + weights[j] / total
        dists.append(d)
    return PrdLottery.from_dicts(dists)


def prd_expected_payoff(g: StageGame, lot: PrdLottery, spec: DiscountSpec) -> PayoffVector:
    """Exact expectation of v over independent per-overlap draws."""
    if lot.n != g.n:
        raise ValueError(f"lottery has {lot.n} overlaps, game has {g.n} players")
    Delta = spec.Delta
    acc = [Fraction(0)] * g.n
    for draw in itertools.product(*lot.per_overlap):
        prob = math.prod(pr for _, pr in draw)
        v = _stable_value(g, tuple(a for a, _ in draw), Delta)
        for i in range(g.n):
            acc[i] += prob * v[i]
    return tuple(acc)


@dataclass(frozen=True)
class SimulationResult:
    mean: PayoffVector
    stderr: tuple[float, ...]
    trials: int
    seed: int


def _draw_tables(lot: PrdLottery) -> tuple[np.ndarray, np.ndarray]:
    n = lot.n
    K = max(len(d) for d in lot.per_overlap)
    cum = np.zeros((n, K), dtype=np.int64)
    denom = np.zeros(n, dtype=np.int64)
    for k, dist in enumerate(lot.per_overlap):
        den = math.lcm(*(pr.denominator for _, pr in dist))
        if den >= kernels.INT64_SAFE:
            raise ValueError("lottery denominators too large to sample exactly")
        run = 0
        for j, (_, pr) in enumerate(dist):
            run += int(pr * den)
            cum[k, j] = run
        cum[k, len(dist):] = den
        denom[k] = den
    return cum, denom


def prd_simulate(g: StageGame, lot: PrdLottery, spec: DiscountSpec, seed: int, trials: int) -> SimulationResult:
    """Monte Carlo playout: one draw per overlap, held for ``T`` periods.

    Realized lifetime payoffs are accumulated exactly; only the standard
    error is a float.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if lot.n != g.n:
        raise ValueError(f"lottery has {lot.n} overlaps, game has {g.n} players")
    cum, denom = _draw_tables(lot)
    draws = kernels.sample_draws(cum, denom, trials, seed)
    n = g.n
    # one mixed-radix code per trial; counting codes is much cheaper than row-wise unique
    sizes = [len(d) for d in lot.per_overlap]
    radix = np.cumprod([1] + sizes[:-1]).astype(np.int64)
    counts = np.bincount(draws @ radix, minlength=math.prod(sizes))
    total = [Fraction(0)] * n
    square = [Fraction(0)] * n
    for code in np.flatnonzero(counts):
        count = counts[code]
        picks = np.unravel_index(code, sizes[::-1])[::-1]
        profiles = tuple(lot.per_overlap[k][int(picks[k])][0] for k in range(n))
        played = tuple(a for a in profiles for _ in range(spec.T))
        value = _lifetime_value(g, played, spec.delta, spec.T)
        for i in range(n):
            total[i] += int(count) * value[i]
            square[i] += int(count) * value[i] ** 2
    mean = tuple(t / trials for t in total)
    if trials == 1:
        se = (0.0,) * n
    else:
        var = [(sq - trials * m * m) / (trials - 1) for sq, m in zip(square, mean)]
        se = tuple(math.sqrt(float(v) / trials) for v in var)
    return SimulationResult(mean, se, trials, seed)


def random_lifetime_sequence(g: StageGame, T: int, seed: int) -> LifetimeSequence:
    rng = SplitMix64(seed)
    return tuple(g.profiles[rng.below(g.num_profiles)] for _ in range(g.n * T))


# -- non-periodic counterexample -----------------------------------------------


@dataclass(frozen=True)
class NonPeriodicReport:
    delta: Fraction
    delta_prime: Fraction
    target_player1: Fraction
    target_player2: Fraction
    best_player2_under_prime: Fraction
    brute_force_best: Fraction

    @property
    def infeasible_under_prime(self) -> bool:
        return self.best_player2_under_prime < self.target_player2


def nonperiodic_counterexample(delta, delta_prime) -> NonPeriodicReport:
    """Two-player, two-period-lifetime stream (1,0),(1,0),(0,1),(0,1),...

    Under ``delta`` the first generation of player 2 (alive in periods 2
    and 3) averages ``delta/(1+delta)``.  Under ``delta_prime``, keeping
    player 1's first generation at 1 forces (1,0) in periods 1 and 2, and
    the best player 2 can then get is ``delta'/(1+delta')``.  The brute
    force over the three relevant periods confirms the closed form.
    """
    delta, delta_prime = Fraction(delta), Fraction(delta_prime)
    if not 0 < delta_prime < delta < 1:
        raise ValueError(f"need 0 < delta' < delta < 1, got delta={delta}, delta'={delta_prime}")
    target2 = delta / (1 + delta)
    closed = delta_prime / (1 + delta_prime)
    d = delta_prime
    best = None
    for u1, u2, u3 in itertools.product(((1, 0), (0, 1)), repeat=3):
        p1 = (u1[0] + d * u2[0]) / (1 + d)
        if p1 != 1:
            continue
        p2 = (u2[1] + d * u3[1]) / (1 + d)
        best = p2 if best is None else max(best, p2)
    return NonPeriodicReport(delta, delta_prime, Fraction(1), target2, closed, best)
