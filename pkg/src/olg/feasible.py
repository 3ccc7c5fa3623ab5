"""Payoffs of periodic OLG play and the feasible payoff set.

Everything downstream of :func:`effective_discount` is parameterised by the
effective discount ``Delta = delta ** T``.  A stable sequence is a tuple of
``n`` action profiles; the k-th profile is played throughout overlap k, and
player i is youngest in overlap i.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from olg import kernels
from olg.geometry import Point, Polytope, as_point
from olg.stage_game import ActionProfile, PayoffVector, StageGame

StableSequence = tuple[ActionProfile, ...]
LifetimeSequence = tuple[ActionProfile, ...]

DEFAULT_ENUM_CAP = 10**6


class EnumerationCapError(RuntimeError):
    """Raised when an exhaustive enumeration would exceed the configured cap."""


def enum_cap() -> int:
    raw = os.environ.get("OLG_ENUM_CAP")
    return int(raw) if raw else DEFAULT_ENUM_CAP


def check_cap(count: int, what: str) -> None:
    cap = enum_cap()
    if count > cap:
        raise EnumerationCapError(f"{what}: {count} candidates exceeds cap {cap} (set OLG_ENUM_CAP)")


@dataclass(frozen=True)
class DiscountSpec:
    delta: Fraction
    T: int

    def __post_init__(self):
        if not 0 < self.delta <= 1:
            raise ValueError(f"delta must lie in (0, 1], got {self.delta}")
        if not isinstance(self.T, int) or self.T < 1:
            raise ValueError(f"T must be a positive integer, got {self.T}")

    @property
    def Delta(self) -> Fraction:
        return self.delta**self.T


def effective_discount(delta, T: int) -> DiscountSpec:
    return DiscountSpec(Fraction(delta), T)


def check_Delta(Delta) -> Fraction:
    Delta = Fraction(Delta)
    if not 0 < Delta <= 1:
        raise ValueError(f"effective discount must lie in (0, 1], got {Delta}")
    return Delta


def _cyclic_average(weights: Sequence[Fraction], stream: Sequence[Fraction]) -> Fraction:
    return sum(w * x for w, x in zip(weights, stream)) / sum(weights)


def stable_payoff(g: StageGame, s: StableSequence, Delta) -> PayoffVector:
    Delta = check_Delta(Delta)
    _check_sequence(g, s, g.n)
    n = g.n
    weights = [Delta**k for k in range(n)]
    us = [g.payoffs[g.profile_index(a)] for a in s]
    return tuple(_cyclic_average(weights, [us[(i + k) % n][i] for k in range(n)]) for i in range(n))


def lifetime_payoff(g: StageGame, seq: LifetimeSequence, spec: DiscountSpec) -> PayoffVector:
    n, T = g.n, spec.T
    L = n * T
    _check_sequence(g, seq, L)
    weights = [spec.delta**k for k in range(L)]
    us = [g.payoffs[g.profile_index(a)] for a in seq]
    return tuple(_cyclic_average(weights, [us[(i * T + k) % L][i] for k in range(L)]) for i in range(n))


def stretch(s: StableSequence, T: int) -> LifetimeSequence:
    return tuple(a for a in s for _ in range(T))


def _check_sequence(g: StageGame, seq, length: int) -> None:
    if len(seq) != length:
        raise ValueError(f"sequence has {len(seq)} profiles, expected {length}")
    for a in seq:
        g.check_profile(a)


@dataclass(frozen=True)
class StableTable:
    """Exact ``v`` values of every stable sequence, in lexicographic order.

    Row ``s`` of ``num`` divided by ``den`` is ``v`` of the sequence whose
    profile indices are the base-|A| digits of ``s`` (overlap 1 first).
    """

    num: np.ndarray
    den: int
    P: int
    n: int

    def sequence(self, s: int) -> tuple[int, ...]:
        digits = []
        for _ in range(self.n):
            s, d = divmod(s, self.P)
            digits.append(d)
        return tuple(reversed(digits))

    def point(self, s: int) -> Point:
        return tuple(Fraction(int(x), self.den) for x in self.num[s])


def discount_weights(Delta: Fraction, length: int) -> tuple[np.ndarray, int]:
    """Integer weights ``p**k * q**(length-1-k)`` for ``Delta = p/q`` and their sum."""
    p, q = Delta.numerator, Delta.denominator
    w = [p**k * q ** (length - 1 - k) for k in range(length)]
    return kernels.weights_array(w), sum(w)


def stable_table(g: StageGame, Delta: Fraction) -> StableTable:
    Delta = check_Delta(Delta)
    # the cap is checked on every call so a lowered cap also applies to cached games
    check_cap(g.num_profiles**g.n, "stable sequences")
    return _stable_table(g, Delta)


@lru_cache(maxsize=128)
def _stable_table(g: StageGame, Delta: Fraction) -> StableTable:
    P, n = g.num_profiles, g.n
    M = P**n
    U, D = g.integer_payoffs
    dpow, total = discount_weights(Delta, n)
    if not kernels.exact_fits(U, dpow):
        U, dpow = U.astype(object), dpow.astype(object)
    num = kernels.stable_numerators(U, dpow, 0, M)
    return StableTable(num, D * total, P, n)


def unique_rows(arr: np.ndarray) -> tuple[list[tuple], list[int]]:
    """Distinct rows in sorted order, each with the index of its first occurrence."""
    if arr.dtype != object:
        rows, first = np.unique(arr, axis=0, return_index=True)
        return [tuple(int(x) for x in r) for r in rows], [int(i) for i in first]
    seen: dict[tuple, int] = {}
    for i, r in enumerate(arr):
        seen.setdefault(tuple(int(x) for x in r), i)
    keys = sorted(seen)
    return keys, [seen[k] for k in keys]


def _profiles(g: StageGame, digits) -> StableSequence:
    return tuple(g.profiles[d] for d in digits)


def vertex_generators(g: StageGame, Delta) -> dict[Point, StableSequence]:
    """Extreme points of F(Delta), each with its lexicographically first generator."""
    Delta = check_Delta(Delta)
    table = stable_table(g, Delta)
    rows, first = unique_rows(table.num)
    pts = {tuple(Fraction(x, table.den) for x in r): i for r, i in zip(rows, first)}
    poly = Polytope.from_points(pts)
    return {v: _profiles(g, table.sequence(pts[v])) for v in poly.vertices}


def feasible_set(g: StageGame, Delta) -> Polytope:
    Delta = check_Delta(Delta)
    check_cap(g.num_profiles**g.n, "stable sequences")
    return _feasible_set(g, Delta)


@lru_cache(maxsize=256)
def _feasible_set(g: StageGame, Delta: Fraction) -> Polytope:
    table = _stable_table(g, Delta)
    rows, _ = unique_rows(table.num)
    return Polytope.from_scaled(rows, table.den)


def welfare(g: StageGame, s: StableSequence, Delta, lam: Sequence) -> Fraction:
    lam = _direction(lam, g.n)
    return sum(l * v for l, v in zip(lam, stable_payoff(g, s, Delta)))


def _direction(lam, n) -> tuple[Fraction, ...]:
    lam = as_point(lam)
    if len(lam) != n:
        raise ValueError(f"direction has {len(lam)} weights, expected {n}")
    if not any(lam):
        raise ValueError("direction must be nonzero")
    return lam


@dataclass(frozen=True)
class WelfareRecord:
    direction: tuple[Fraction, ...]
    Delta: Fraction
    value: Fraction
    optimizers: tuple[StableSequence, ...]
    optimizer_payoff_sequences: tuple[tuple[PayoffVector, ...], ...]


def max_welfare(g: StageGame, Delta, lam: Sequence) -> WelfareRecord:
    Delta = check_Delta(Delta)
    lam = _direction(lam, g.n)
    table = stable_table(g, Delta)
    scale = math.lcm(*(x.denominator for x in lam))
    lam_int = [int(x * scale) for x in lam]
    num = table.num
    bound = int(np.abs(num).max(initial=0)) * sum(abs(x) for x in lam_int) if num.dtype != object else None
    if bound is not None and bound < kernels.INT64_SAFE:
        scores = num @ np.array(lam_int, dtype=np.int64)
    else:
        scores = num.astype(object) @ np.array(lam_int, dtype=object)
    top = scores.max()
    winners = np.flatnonzero(scores == top)
    optimizers = tuple(_profiles(g, table.sequence(int(s))) for s in winners)
    payoff_seqs = []
    seen = set()
    for seq in optimizers:
        us = tuple(g.payoffs[g.profile_index(a)] for a in seq)
        if us not in seen:
            seen.add(us)
            payoff_seqs.append(us)
    value = Fraction(int(top), table.den * scale)
    return WelfareRecord(lam, Delta, value, optimizers, tuple(payoff_seqs))


def age_weights(u_seq: Sequence[Sequence], lam: Sequence) -> tuple[Fraction, ...]:
    """Weighted payoff sum by lifecycle position: entry k uses each player at age k+1."""
    n = len(lam)
    if len(u_seq) != n or any(len(u) != n for u in u_seq):
        raise ValueError(f"need {n} payoff vectors of dimension {n}")
    lam = as_point(lam)
    return tuple(sum(lam[i] * Fraction(u_seq[(i + k) % n][i]) for i in range(n)) for k in range(n))


def payoff_sequence(g: StageGame, s: StableSequence) -> tuple[PayoffVector, ...]:
    return tuple(g.payoffs[g.profile_index(a)] for a in s)

