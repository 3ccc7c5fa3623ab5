"""Exact convex geometry on finite point sets (V-representation only)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from olg.lp import find_feasible

Point = tuple[Fraction, ...]


def as_point(xs: Iterable) -> Point:
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True)
class Polytope:
    """Convex hull of ``vertices``; vertices are kept sorted and distinct."""

    dim: int
    vertices: tuple[Point, ...]

    @classmethod
    def from_points(cls, pts: Iterable[Sequence], canonical: bool = True) -> Polytope:
        uniq = sorted({as_point(p) for p in pts})
        if not uniq:
            raise ValueError("a polytope needs at least one point")
        dims = {len(p) for p in uniq}
        if len(dims) != 1:
            raise ValueError(f"mixed point dimensions {sorted(dims)}")
        if canonical:
            uniq = sorted(extreme_points(uniq))
        return cls(dims.pop(), tuple(uniq))

    @classmethod
    def from_scaled(cls, rows: Iterable[Sequence[int]], den: int) -> Polytope:
        """Hull of ``row / den`` for integer rows, computed before dividing."""
        uniq = sorted({tuple(int(x) for x in r) for r in rows})
        if not uniq:
            raise ValueError("a polytope needs at least one point")
        d = len(uniq[0])
        if d <= 2:
            if len(uniq) <= 2:
                ext = uniq
            else:
                ext = _monotone_chain(uniq) if d == 2 else [uniq[0], uniq[-1]]
            return cls(d, tuple(sorted(tuple(Fraction(x, den) for x in v) for v in ext)))
        return cls.from_points(tuple(Fraction(x, den) for x in r) for r in uniq)

    def canonical(self) -> Polytope:
        return Polytope.from_points(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, p) -> bool:
        return hull_membership(as_point(p), self.vertices)


def _check_dims(p: Sequence, pts: Sequence[Sequence]) -> None:
    if not pts:
        raise ValueError("empty point set")
    d = len(p)
    if any(len(q) != d for q in pts):
        raise ValueError("dimension mismatch")


def hull_membership(p: Sequence, pts: Sequence[Sequence]) -> bool:
    """Decide exactly whether ``p`` lies in the convex hull of ``pts``."""
    _check_dims(p, pts)
    p = as_point(p)
    pts = [as_point(q) for q in pts]
    if p in pts:
        return True
    for i in range(len(p)):
        coords = [q[i] for q in pts]
        if p[i] < min(coords) or p[i] > max(coords):
            return False
    if len(pts) == 1:
        return False
    # sum_j w_j q_j = p, sum_j w_j = 1, w >= 0
    A = [[q[i] for q in pts] for i in range(len(p))]
    A.append([Fraction(1)] * len(pts))
    b = list(p) + [Fraction(1)]
    return find_feasible(A, b) is not None


def _probe_directions(d: int) -> list[tuple[int, ...]]:
    span = (-2, -1, 0, 1, 2) if d <= 3 else (-1, 0, 1)
    if d <= 5:
        return [v for v in itertools.product(span, repeat=d) if any(v)]
    dirs = []
    for i in range(d):
        for s in (1, -1):
            dirs.append(tuple(s if j == i else 0 for j in range(d)))
    dirs.append((1,) * d)
    dirs.append((-1,) * d)
    return dirs


def _probe_vertices(pts: list[Point]) -> set[Point]:
    # the lexicographically largest maximiser of a linear functional is a
    # vertex of the maximising face, hence of the hull; pts is sorted
    den = math.lcm(*(x.denominator for q in pts for x in q))
    M = np.array([[int(x * den) for x in q] for q in pts], dtype=object)
    found = set()
    for lam in _probe_directions(len(pts[0])):
        vals = M @ np.array(lam, dtype=object)
        winners = np.flatnonzero(vals == vals.max())
        found.add(pts[int(winners[-1])])
    return found


def extreme_points(pts: Iterable[Sequence]) -> list[Point]:
    uniq = sorted({as_point(p) for p in pts})
    if len(uniq) <= 2:
        return uniq
    if len(uniq[0]) == 1:
        return [uniq[0], uniq[-1]]
    if len(uniq[0]) == 2:
        return sorted(ordered_hull_2d(uniq))
    sure = _probe_vertices(uniq)
    core = sorted(sure)
    # points inside the hull of known vertices are redundant
    rest = [p for p in uniq if p not in sure and not (len(core) > 1 and hull_membership(p, core))]
    pool = core + rest
    out = list(core)
    for p in rest:
        if not hull_membership(p, [q for q in pool if q != p]):
            out.append(p)
    return sorted(out)


def hull_contains(outer: Polytope, inner: Polytope) -> bool:
    return first_outside(outer, inner) is None


def first_outside(outer: Polytope, inner: Polytope) -> Point | None:
    """First vertex of ``inner`` (in sorted order) not in ``outer``, if any."""
    if outer.dim != inner.dim:
        raise ValueError(f"dimension mismatch: {outer.dim} vs {inner.dim}")
    for v in inner.vertices:
        if not hull_membership(v, outer.vertices):
            return v
    return None


def hull_equal(pa: Polytope, pb: Polytope) -> bool:
    return hull_contains(pa, pb) and hull_contains(pb, pa)


def strict_witness(outer: Polytope, inner: Polytope) -> Point | None:
    """Vertex of ``outer`` outside ``inner`` with the largest coordinate sum.

    Ties go to the lexicographically largest vertex.  None when every vertex
    of ``outer`` lies in ``inner``.
    """
    if outer.dim != inner.dim:
        raise ValueError(f"dimension mismatch: {outer.dim} vs {inner.dim}")
    outside = [v for v in outer.vertices if not hull_membership(v, inner.vertices)]
    if not outside:
        return None
    return max(outside, key=lambda v: (sum(v), v))


def hull_strictly_contains(outer: Polytope, inner: Polytope) -> tuple[bool, Point | None]:
    """``(True, witness)`` when ``inner`` is a proper subset of ``outer``.

    The witness is chosen by :func:`strict_witness`.
    """
    if not hull_contains(outer, inner):
        return False, None
    witness = strict_witness(outer, inner)
    return witness is not None, witness


def support_value(p: Polytope, lam: Sequence) -> Fraction:
    return support_points(p, lam)[0]


def support_points(p: Polytope, lam: Sequence) -> tuple[Fraction, list[Point]]:
    """Return the support value of ``p`` along ``lam`` and its maximising vertices."""
    if not p.vertices:
        raise ValueError("empty polytope")
    lam = as_point(lam)
    if len(lam) != p.dim:
        raise ValueError("direction has wrong dimension")
    if not any(lam):
        raise ValueError("direction must be nonzero")
    vals = [sum(l * x for l, x in zip(lam, v)) for v in p.vertices]
    top = max(vals)
    return top, [v for v, s in zip(p.vertices, vals) if s == top]


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _monotone_chain(pts: list) -> list:
    # Andrew's monotone chain on sorted distinct points; strict turns drop collinear points
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def ordered_hull_2d(pts: Iterable[Sequence]) -> list[Point]:
    """Extreme points in counterclockwise order from the lexicographic minimum."""
    pts = sorted({as_point(p) for p in pts})
    if pts and len(pts[0]) != 2:
        raise ValueError("ordered_hull_2d needs 2-dimensional points")
    if len(pts) <= 2:
        return pts
    return _monotone_chain(pts)
