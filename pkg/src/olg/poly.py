"""Univariate polynomials over the rationals and real root isolation.

Polynomials are lists of Fractions, constant term first.  Roots are
isolated with Sturm sequences and refined by rational bisection; a root is
reported exactly whenever bisection lands on it or a simple rational in
its isolating interval is a root.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

DEFAULT_WIDTH = Fraction(1, 2**40)


def trim(p: Sequence) -> list[Fraction]:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def evaluate(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Sequence[Fraction]) -> list[Fraction]:
    return trim([k * c for k, c in enumerate(p)][1:])


def divmod_poly(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / lead
        q[shift] = f
        for j, c in enumerate(b):
            r[shift + j] -= f * c
        r = trim(r)
    return trim(q), r


def gcd_poly(a, b) -> list[Fraction]:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    if not a:
        return a
    return [c / a[-1] for c in a]


def square_free(p) -> list[Fraction]:
    p = trim(p)
    g = gcd_poly(p, derivative(p))
    if len(g) <= 1:
        return p
    return divmod_poly(p, g)[0]


def sturm_chain(p) -> list[list[Fraction]]:
    chain = [trim(p), derivative(p)]
    while chain[-1]:
        r = divmod_poly(chain[-2], chain[-1])[1]
        if not r:
            break
        chain.append([-c for c in r])
    return [c for c in chain if c]


def sign_variations(chain, x: Fraction) -> int:
    signs = [s for s in (evaluate(q, x) for q in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(chain, lo: Fraction, hi: Fraction) -> int:
    """Distinct roots in the half-open interval ``(lo, hi]``."""
    return sign_variations(chain, lo) - sign_variations(chain, hi)


@dataclass(frozen=True)
class Root:
    """A real root: exact when ``lo == hi``, else the unique root in ``(lo, hi)``."""

    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Fraction:
        return self.lo if self.exact else (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.value)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the closed interval ``[lo, hi]``."""
    if lo > hi:
        lo, hi = hi, lo
    fl = lo.numerator // lo.denominator
    if Fraction(fl) == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # lo and hi share integer part; recurse on reciprocals of fractional parts
    inner = simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / inner


class RootIsolator:
    """Isolates and refines the distinct real roots of one polynomial."""

    def __init__(self, p: Sequence):
        p = trim(p)
        if not p:
            raise ValueError("zero polynomial has no isolated roots")
        self.p = square_free(p)
        self.chain = sturm_chain(self.p)

    def count(self, lo, hi) -> int:
        return count_roots(self.chain, Fraction(lo), Fraction(hi))

    def _single(self, lo: Fraction, hi: Fraction) -> Root:
        # exactly one root in (lo, hi]
        if evaluate(self.p, hi) == 0:
            return Root(hi, hi)
        return Root(lo, hi)

    def _linear(self, lo, hi) -> list[Root]:
        x = -self.p[0] / self.p[1]
        return [Root(x, x)] if lo < x <= hi else []

    def isolate(self, lo, hi) -> list[Root]:
        """All distinct roots in ``(lo, hi]``, ascending."""
        if len(self.p) == 2:
            return self._linear(Fraction(lo), Fraction(hi))
        out: list[Root] = []
        stack = [(Fraction(lo), Fraction(hi))]
        while stack:
            a, b = stack.pop()
            c = self.count(a, b)
            if c == 0:
                continue
            if c == 1:
                out.append(self._single(a, b))
                continue
            mid = (a + b) / 2
            stack.append((a, mid))
            stack.append((mid, b))
        return sorted(out, key=lambda r: r.lo)

    def largest(self, lo, hi) -> Root | None:
        """Largest root in ``(lo, hi]``, searching the upper half first."""
        a, b = Fraction(lo), Fraction(hi)
        if len(self.p) == 2:
            found = self._linear(a, b)
            return found[0] if found else None
        if self.count(a, b) == 0:
            return None
        while True:
            c = self.count(a, b)
            if c == 1:
                return self._single(a, b)
            mid = (a + b) / 2
            if self.count(mid, b) > 0:
                a = mid
            else:
                b = mid

    def refine(self, root: Root, width: Fraction = DEFAULT_WIDTH) -> Root:
        if root.exact:
            return root
        a, b = root.lo, root.hi
        while b - a > width:
            mid = (a + b) / 2
            if evaluate(self.p, mid) == 0:
                return Root(mid, mid)
            if self.count(a, mid) == 1:
                b = mid
            else:
                a = mid
        guess = simplest_between(a, b)
        if a < guess < b and evaluate(self.p, guess) == 0:
            return Root(guess, guess)
        return self._single(a, b)


def real_roots(p: Sequence, lo=0, hi=1, width: Fraction = DEFAULT_WIDTH) -> list[Root]:
    """Distinct roots in ``(lo, hi]`` refined to the given width."""
    iso = RootIsolator(p)
    return [iso.refine(r, width) for r in iso.isolate(lo, hi)]
