"""Comparative statics of the feasible set in the effective discount.

Covers the optimality inequalities satisfied by welfare maximisers, the
closed-form derivative of welfare in Delta and its decomposition, set
monotonicity sweeps, the strictness criterion, the two limit sets, and
breakpoints of the optimal payoff sequence along a direction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from olg import kernels
from olg.feasible import (
    StableSequence,
    _direction,
    age_weights,
    check_cap,
    check_Delta,
    feasible_set,
    max_welfare,
    payoff_sequence,
    unique_rows,
)
from olg.geometry import (
    Point,
    Polytope,
    first_outside,
    hull_contains,
    strict_witness,
)
from olg.lp import find_feasible
from olg.poly import Root, RootIsolator, evaluate, trim
from olg.rng import SplitMix64
from olg.stage_game import StageGame, cube_coincides, one_shot_hull, payoff_cube

DIRECTION_SEED = 20240917


# -- optimality inequalities ---------------------------------------------------


@dataclass(frozen=True)
class Margin:
    m: int
    value: Fraction

    @property
    def holds(self) -> bool:
        return self.value >= 0


def lemma1_check(u_seq: Sequence[Sequence], Delta, lam: Sequence) -> list[Margin]:
    """Margins ``sum_{k<=m} Delta^(k-1) (w_k - w_{n-m+k})`` for m = 1..n-1.

    Every margin is nonnegative when ``u_seq`` is a welfare-optimal payoff
    sequence at ``Delta`` along ``lam``.
    """
    Delta = check_Delta(Delta)
    n = len(lam)
    if len(u_seq) != n:
        raise ValueError(f"payoff sequence has length {len(u_seq)}, expected {n}")
    w = age_weights(u_seq, lam)
    out = []
    for m in range(1, n):
        value = sum(Delta ** (k - 1) * (w[k - 1] - w[n - m + k - 1]) for k in range(1, m + 1))
        out.append(Margin(m, value))
    return out


def _open_unit(Delta) -> Fraction:
    Delta = Fraction(Delta)
    if not 0 < Delta < 1:
        raise ValueError(f"Delta must lie in (0, 1), got {Delta}")
    return Delta


def derivative_numerator(w: Sequence, Delta) -> Fraction:
    """Numerator of d/dDelta of ``sum_k Delta^(k-1) w_k / sum_k Delta^(k-1)``."""
    Delta = _open_unit(Delta)
    n = len(w)
    total = Fraction(0)
    for k in range(1, n + 1):
        coef = sum((k - m) * Delta ** (k + m - 3) for m in range(1, n + 1) if m != k)
        total += coef * Fraction(w[k - 1])
    return total


def pm_coefficients(n: int, Delta) -> list[Fraction]:
    """``p_m = Delta^(n-2) + ... + Delta^(n-m-1)`` for m = 1..n-1."""
    Delta = _open_unit(Delta)
    return [sum(Delta**j for j in range(n - m - 1, n - 1)) for m in range(1, n)]


def pm_decomposition(w: Sequence, Delta) -> tuple[list[Fraction], Fraction]:
    """Coefficients ``p_m`` and ``sum_m p_m * (constraint m's left-hand side)``.

    The reconstruction equals :func:`derivative_numerator` for every ``w``.
    """
    Delta = _open_unit(Delta)
    w = [Fraction(x) for x in w]
    n = len(w)
    p = pm_coefficients(n, Delta)
    total = Fraction(0)
    for m in range(1, n):
        lhs = sum(Delta ** (k - 1) * (w[n - m + k - 1] - w[k - 1]) for k in range(1, m + 1))
        total += p[m - 1] * lhs
    return p, total


def welfare_derivative(g: StageGame, s: StableSequence, Delta, lam: Sequence) -> Fraction:
    Delta = _open_unit(Delta)
    lam = _direction(lam, g.n)
    w = age_weights(payoff_sequence(g, s), lam)
    denom = sum(Delta**k for k in range(g.n))
    return derivative_numerator(w, Delta) / denom**2


def direction_family(n: int, seed: int = DIRECTION_SEED, extra: int = 8) -> list[tuple[Fraction, ...]]:
    """Axis directions, all sign vectors, then ``extra`` seeded random rational directions."""
    dirs: list[tuple[Fraction, ...]] = []
    for i in range(n):
        for sgn in (1, -1):
            e = [Fraction(0)] * n
            e[i] = Fraction(sgn)
            dirs.append(tuple(e))
    for signs in itertools.product((1, -1), repeat=n):
        dirs.append(tuple(Fraction(s) for s in signs))
    rng = SplitMix64(seed)
    while len(dirs) < 2 * n + 2**n + extra:
        lam = tuple(rng.rational(-5, 5, 4) for _ in range(n))
        if any(lam) and lam not in dirs:
            dirs.append(lam)
    return dirs


@dataclass
class OptimalityReport:
    checked: int = 0
    lemma1_failures: list = field(default_factory=list)
    lemma2_failures: list = field(default_factory=list)
    # optimisers at Delta = 1 that violate the inequalities while another optimiser satisfies them
    boundary_exceptions: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.lemma1_failures and not self.lemma2_failures


def optimality_checks(g: StageGame, deltas: Sequence, directions: Sequence | None = None) -> OptimalityReport:
    """Check both optimality lemmas for every optimiser on a Delta grid and direction family.

    For Delta < 1 every optimiser must satisfy the inequalities.  At Delta = 1
    all rotations of an optimal sequence tie, so only the optimisers that are
    limits of optima from the left are bound by them; there the check is that
    at least one optimiser passes.
    """
    directions = direction_family(g.n) if directions is None else directions
    report = OptimalityReport()
    for Delta in deltas:
        Delta = check_Delta(Delta)
        for lam in directions:
            rec = max_welfare(g, Delta, lam)
            bad_here = []
            for useq in rec.optimizer_payoff_sequences:
                report.checked += 1
                bad = [mg for mg in lemma1_check(useq, Delta, lam) if not mg.holds]
                if bad:
                    bad_here.append((Delta, lam, useq, bad))
                if Delta < 1:
                    w = age_weights(useq, lam)
                    eta = derivative_numerator(w, Delta)
                    if eta > 0:
                        report.lemma2_failures.append((Delta, lam, useq, eta))
            if Delta < 1 or len(bad_here) == len(rec.optimizer_payoff_sequences):
                report.lemma1_failures.extend(bad_here)
            else:
                report.boundary_exceptions.extend(bad_here)
    return report


# -- set monotonicity ----------------------------------------------------------


@dataclass(frozen=True)
class PairVerdict:
    Delta: Fraction
    Delta_prime: Fraction
    contains: bool
    strict: bool
    witness: Point | None


@dataclass(frozen=True)
class MonotonicityReport:
    deltas: tuple[Fraction, ...]
    verdicts: tuple[PairVerdict, ...]

    @property
    def all_contained(self) -> bool:
        return all(v.contains for v in self.verdicts)

    @property
    def all_strict(self) -> bool:
        return all(v.strict for v in self.verdicts)


def _ascending(deltas) -> tuple[Fraction, ...]:
    ds = tuple(check_Delta(d) for d in deltas)
    if any(a >= b for a, b in zip(ds, ds[1:])):
        raise ValueError("deltas must be strictly ascending")
    return ds


def compare_pair(g: StageGame, Delta, Delta_prime) -> PairVerdict:
    """Is F(Delta_prime) inside F(Delta), and strictly so?"""
    big, small = feasible_set(g, Fraction(Delta)), feasible_set(g, Fraction(Delta_prime))
    contains = hull_contains(big, small)
    witness = strict_witness(big, small) if contains else None
    strict = witness is not None
    return PairVerdict(Fraction(Delta), Fraction(Delta_prime), contains, strict, witness)


def monotonicity_sweep(g: StageGame, deltas: Sequence) -> MonotonicityReport:
    ds = _ascending(deltas)
    verdicts = tuple(compare_pair(g, a, b) for a, b in zip(ds, ds[1:]))
    return MonotonicityReport(ds, verdicts)


def discount_monotone(g: StageGame, delta, delta_prime, T: int) -> bool:
    """F(delta', T) is inside F(delta, T) for delta < delta'."""
    delta, delta_prime = Fraction(delta), Fraction(delta_prime)
    if not 0 < delta < delta_prime <= 1:
        raise ValueError("need 0 < delta < delta' <= 1")
    return compare_pair(g, delta**T, delta_prime**T).contains


def horizon_monotone(g: StageGame, delta, T: int) -> bool:
    """F(delta, T) is inside F(delta, T + 1)."""
    delta = Fraction(delta)
    if delta == 1:
        return True
    return compare_pair(g, delta ** (T + 1), delta**T).contains


# -- strictness ----------------------------------------------------------------


@dataclass(frozen=True)
class StrictnessCertificate:
    strict: bool
    edge: tuple[Point, Point] | None = None
    direction: tuple[Fraction, ...] | None = None
    cube_witness: Point | None = None


def _dot(a, b) -> Fraction:
    return sum(x * y for x, y in zip(a, b))


def exposing_direction(u: Point, v: Point, others: Sequence[Point]) -> tuple[Fraction, ...] | None:
    """Direction whose maximisers over ``{u, v} + others`` are exactly ``u`` and ``v``."""
    n = len(u)
    diff = [a - b for a, b in zip(u, v)]
    if not others:
        j = next(k for k, x in enumerate(diff) if x != 0)
        i = (j + 1) % n
        lam = [Fraction(0)] * n
        lam[i], lam[j] = diff[j], -diff[i]
        return tuple(lam)
    # lam = plus - minus; lam.(u - v) = 0 and lam.(u - x) - s_x = 1
    m = len(others)
    A = [diff + [-d for d in diff] + [Fraction(0)] * m]
    b = [Fraction(0)]
    for r, x in enumerate(others):
        gap = [a - c for a, c in zip(u, x)]
        slack = [Fraction(0)] * m
        slack[r] = Fraction(-1)
        A.append(gap + [-d for d in gap] + slack)
        b.append(Fraction(1))
    sol = find_feasible(A, b)
    if sol is None:
        return None
    return tuple(sol[i] - sol[n + i] for i in range(n))


def strictness_check(g: StageGame) -> StrictnessCertificate:
    """Decide whether the feasible set strictly shrinks in Delta.

    When it does, return an exposed edge of the one-shot hull whose endpoints
    differ in at least two coordinates, together with the exposing direction.
    """
    V, cube = one_shot_hull(g), payoff_cube(g)
    if cube_coincides(g):
        return StrictnessCertificate(False)
    verts = list(V.vertices)
    for u, v in itertools.combinations(verts, 2):
        if sum(1 for a, b in zip(u, v) if a != b) < 2:
            continue
        others = [x for x in verts if x != u and x != v]
        lam = exposing_direction(u, v, others)
        if lam is not None:
            return StrictnessCertificate(True, edge=(u, v), direction=lam)
    return StrictnessCertificate(True, cube_witness=first_outside(V, cube))


def edge_gain(g: StageGame, cert: StrictnessCertificate, Delta) -> Fraction:
    """``W*_lam(Delta) - lam . u`` for the certificate's edge; positive for Delta in (0, 1)."""
    if cert.edge is None:
        raise ValueError("certificate has no edge")
    return max_welfare(g, Delta, cert.direction).value - _dot(cert.direction, cert.edge[0])


# -- limits --------------------------------------------------------------------


def limit_set(g: StageGame, end: str) -> Polytope:
    """Hull of the limiting v-values as Delta -> 0 or Delta -> 1.

    At Delta = 0 only each player's first overlap counts; at Delta = 1 the
    weights are uniform.  Both are evaluated from the stable-sequence kernel
    with the limiting weight vector rather than assumed.
    """
    if end not in ("zero", "one"):
        raise ValueError(f"end must be 'zero' or 'one', got {end!r}")
    n, P = g.n, g.num_profiles
    check_cap(P**n, "stable sequences")
    U, D = g.integer_payoffs
    w = [1] * n if end == "one" else [1] + [0] * (n - 1)
    dpow = kernels.weights_array(w)
    if U.dtype == object:
        dpow = dpow.astype(object)
    num = kernels.stable_numerators(U, dpow, 0, P**n)
    rows, _ = unique_rows(num)
    return Polytope.from_scaled(rows, D * sum(w))


def limit_solution(g: StageGame, lam: Sequence, end: str) -> list[StableSequence]:
    """Optimal stable sequences in the Delta -> 1 or Delta -> 0 limit."""
    lam = _direction(lam, g.n)
    if end == "one":
        scores = [_dot(lam, u) for u in g.payoffs]
        top = max(scores)
        best = [a for a, s in zip(g.profiles, scores) if s == top]
        per_overlap = [best] * g.n
    elif end == "zero":
        per_overlap = []
        for k in range(g.n):
            # player k is youngest in overlap k
            scores = [lam[k] * u[k] for u in g.payoffs]
            top = max(scores)
            per_overlap.append([a for a, s in zip(g.profiles, scores) if s == top])
    else:
        raise ValueError(f"end must be 'zero' or 'one', got {end!r}")
    check_cap(math.prod(len(b) for b in per_overlap), "limit solutions")
    return list(itertools.product(*per_overlap))


# -- breakpoints ---------------------------------------------------------------


@dataclass(frozen=True)
class OptimalGroup:
    """Stable sequences sharing one age-weight vector, hence one welfare curve."""

    weights: tuple[Fraction, ...]
    payoff_sequences: tuple
    sequences: tuple[StableSequence, ...]


@dataclass(frozen=True)
class Piece:
    lo: Fraction
    hi: Fraction
    group: OptimalGroup


@dataclass(frozen=True)
class Breakpoint:
    root: Root
    left: OptimalGroup
    right: OptimalGroup
    tied: tuple[OptimalGroup, ...]


@dataclass(frozen=True)
class BreakpointReport:
    direction: tuple[Fraction, ...]
    pieces: tuple[Piece, ...]
    breakpoints: tuple[Breakpoint, ...]
    method: str
    resolution: Fraction


def _weight_groups(g: StageGame, lam: tuple[Fraction, ...]) -> list[OptimalGroup]:
    n, P = g.n, g.num_profiles
    M = P**n
    check_cap(M, "stable sequences")
    U, D = g.integer_payoffs
    scale = math.lcm(*(x.denominator for x in lam))
    lam_int = [int(x * scale) for x in lam]
    dtype = np.int64 if U.dtype != object and int(np.abs(U).max(initial=0)) * sum(map(abs, lam_int)) < kernels.INT64_SAFE else object
    Ui = U.astype(dtype)
    lam_arr = np.array(lam_int, dtype=dtype)
    idx = np.arange(M, dtype=np.int64)
    digits = (idx[:, None] // (P ** np.arange(n - 1, -1, -1, dtype=np.int64))[None, :]) % P
    players = np.arange(n)
    w = np.zeros((M, n), dtype=dtype)
    for k in range(n):
        w[:, k] = (Ui[digits[:, (players + k) % n], players] * lam_arr).sum(axis=1)
    buckets: dict[tuple, list[int]] = {}
    for s in range(M):
        buckets.setdefault(tuple(int(x) for x in w[s]), []).append(s)
    groups = []
    denom = D * scale
    for key in sorted(buckets):
        seqs = tuple(tuple(g.profiles[d] for d in digits[s]) for s in buckets[key])
        pseqs = tuple(dict.fromkeys(payoff_sequence(g, s) for s in seqs))
        groups.append(OptimalGroup(tuple(Fraction(x, denom) for x in key), pseqs, seqs))
    return groups


def _left_key(w: Sequence[Fraction], x: Fraction) -> tuple[Fraction, ...]:
    # Taylor coefficients of N(x - e) in e orders the curves just left of x
    coeffs = list(w)
    key = []
    sign = 1
    while coeffs:
        key.append(sign * evaluate(coeffs, x))
        coeffs = [k * c for k, c in enumerate(coeffs)][1:]
        coeffs = [c / len(key) for c in coeffs]
        sign = -sign
    return tuple(key)


def _left_best(groups: Sequence[OptimalGroup], x: Fraction) -> int:
    return max(range(len(groups)), key=lambda j: _left_key(groups[j].weights, x))


def _descartes_positive(d: Sequence[Fraction]) -> bool:
    signs = [c > 0 for c in d if c != 0]
    return any(a != b for a, b in zip(signs, signs[1:]))


def _largest_below(d: list[Fraction], r: Fraction) -> tuple[RootIsolator, Root] | None:
    d = trim(d)
    if not _descartes_positive(d):
        return None
    while evaluate(d, r) == 0:
        # deflate the root at r itself
        q, acc = [], Fraction(0)
        for c in reversed(d):
            acc = acc * r + c
            q.append(acc)
        d = list(reversed(q[:-1]))
    if len(d) <= 1:
        return None
    iso = RootIsolator(d)
    root = iso.largest(0, r)
    return None if root is None else (iso, root)


def _top_cluster(cands, resolution):
    width = Fraction(1, 2**8)
    while True:
        cands = [(iso, iso.refine(root, max(width, resolution)), j) for iso, root, j in cands]
        top = max(root.lo for _, root, _ in cands)
        cands = [c for c in cands if c[1].hi >= top]
        if width <= resolution or all(root.exact for _, root, _ in cands):
            return cands
        width /= 2**8


def breakpoints(
    g: StageGame,
    lam: Sequence,
    max_n_exact: int = 4,
    resolution: Fraction = Fraction(1, 2**40),
    grid_size: int = 4096,
) -> BreakpointReport:
    """Partition (0, 1] by the optimal welfare curve along ``lam``."""
    lam = _direction(lam, g.n)
    if g.n > max_n_exact:
        return _grid_breakpoints(g, lam, grid_size)
    groups = _weight_groups(g, lam)
    r = Fraction(1)
    cur = _left_best(groups, r)
    pieces: list[Piece] = []
    bps: list[Breakpoint] = []
    while True:
        cands = []
        base = groups[cur].weights
        for j, grp in enumerate(groups):
            if j == cur:
                continue
            found = _largest_below([a - b for a, b in zip(grp.weights, base)], r)
            if found is not None:
                cands.append((found[0], found[1], j))
        if not cands:
            pieces.append(Piece(Fraction(0), r, groups[cur]))
            break
        cluster = _top_cluster(cands, resolution)
        exact = [root for _, root, _ in cluster if root.exact]
        if exact:
            b = max(root.lo for root in exact)
            root, t = Root(b, b), b
        else:
            lo = min(root.lo for _, root, _ in cluster)
            hi = max(root.hi for _, root, _ in cluster)
            root, t = Root(lo, hi), lo
        nxt = _left_best(groups, t)
        if nxt != cur:
            if root.exact:
                vals = [evaluate(grp.weights, t) for grp in groups]
                tied = tuple(grp for grp, v in zip(groups, vals) if v == max(vals))
            else:
                tied = (groups[nxt], groups[cur])
            bps.append(Breakpoint(root, groups[nxt], groups[cur], tied))
            pieces.append(Piece(t, r, groups[cur]))
            cur = nxt
        r = t
    # merge pieces interrupted only by tangencies
    merged: list[Piece] = []
    for pc in pieces:
        if merged and merged[-1].group == pc.group:
            merged[-1] = Piece(pc.lo, merged[-1].hi, pc.group)
        else:
            merged.append(pc)
    return BreakpointReport(lam, tuple(reversed(merged)), tuple(reversed(bps)), "exact", resolution)


def _grid_breakpoints(g: StageGame, lam, grid_size: int) -> BreakpointReport:
    n, P = g.n, g.num_profiles
    check_cap(P**n, "stable sequences")
    Uf = np.array([[float(x) for x in u] for u in g.payoffs])
    table = kernels.age_weight_table(Uf, [float(x) for x in lam])
    grid = np.arange(1, grid_size + 1) / grid_size
    arg = kernels.grid_argmax(table, grid)

    def group_of(s: int) -> OptimalGroup:
        digits = []
        for _ in range(n):
            s, d = divmod(s, P)
            digits.append(d)
        seq = tuple(g.profiles[d] for d in reversed(digits))
        useq = payoff_sequence(g, seq)
        return OptimalGroup(age_weights(useq, lam), (useq,), (seq,))

    pieces: list[Piece] = []
    bps: list[Breakpoint] = []
    start = 0
    for k in range(1, grid_size + 1):
        if k == grid_size or not np.array_equal(table[arg[k]], table[arg[start]]):
            grp = group_of(int(arg[start]))
            lo = Fraction(0) if start == 0 else Fraction(start, grid_size)
            pieces.append(Piece(lo, Fraction(k, grid_size), grp))
            if k < grid_size:
                nxt = group_of(int(arg[k]))
                root = Root(Fraction(k, grid_size), Fraction(k + 1, grid_size))
                bps.append(Breakpoint(root, grp, nxt, (grp, nxt)))
            start = k
    return BreakpointReport(lam, tuple(pieces), tuple(bps), "grid", Fraction(1, grid_size))
