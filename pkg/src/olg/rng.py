"""SplitMix64, the package's only source of pseudo-randomness.

The k-th output (k = 1, 2, ...) for a seed ``s`` is ``mix(s + k * GAMMA)``
modulo 2**64, where ``mix`` is the standard SplitMix64 finaliser below.
Outputs are therefore addressable by index, which lets the vectorised
kernels reproduce exactly the stream this class produces one value at a
time.
"""

from __future__ import annotations

from fractions import Fraction

GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK = (1 << 64) - 1


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * MIX1) & MASK
    z = ((z ^ (z >> 27)) * MIX2) & MASK
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next(self) -> int:
        self.state = (self.state + GAMMA) & MASK
        return mix64(self.state)

    def below(self, k: int) -> int:
        """Integer in ``[0, k)``; modulo bias is at most ``k / 2**64``."""
        return self.next() % k

    def rational(self, lo: int, hi: int, max_den: int) -> Fraction:
        """Rational ``p/q`` with ``p`` in ``[lo, hi]`` and ``q`` in ``[1, max_den]``."""
        p = lo + self.below(hi - lo + 1)
        q = 1 + self.below(max_den)
        return Fraction(p, q)


def derive_seed(seed: int, stream: int) -> int:
    """Independent child seed for a numbered sub-stream."""
    return mix64((seed + (stream + 1) * GAMMA) & MASK)
