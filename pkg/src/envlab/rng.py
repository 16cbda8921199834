"""Deterministic pseudorandom numbers for plays and samplers.

The generator is splitmix64 (Steele, Lea & Flood's SplitMix), chosen
because its n-th output is a pure function of (seed, n):

    out(n) = mix64(seed + (n + 1) * GOLDEN)   mod 2**64

That makes the stream random-access.  The sequential generator below,
the vectorized numpy kernel and the compiled kernel all consume the
same indexed stream, so a play's uniforms are identical no matter which
backend produced them, and Monte-Carlo shards can be merged by handing
each shard a disjoint index range.  The algorithm is part of the
package contract and will not change between releases.

Uniforms are doubles in [0, 1) built from the top 53 bits.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_TO_UNIT = 2.0**-53


def mix64(z: int) -> int:
    """Finalizer of splitmix64 (all arithmetic mod 2**64)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def u64_at(seed: int, index: int) -> int:
    """The index-th raw output of the stream for this seed."""
    return mix64((seed + (index + 1) * GOLDEN) & _MASK64)


def uniform_at(seed: int, index: int) -> float:
    """The index-th uniform in [0, 1)."""
    return (u64_at(seed, index) >> 11) * _TO_UNIT


class SplitMix64:
    """Sequential view of the indexed stream.

    next_u64() walks indices 0, 1, 2, ... for the given seed.
    """

    __slots__ = ("seed", "_state", "_count")

    def __init__(self, seed: int) -> None:
        self.seed = int(seed) & _MASK64
        self._state = self.seed
        self._count = 0

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & _MASK64
        self._count += 1
        return mix64(self._state)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * _TO_UNIT

    @property
    def draws(self) -> int:
        """How many outputs have been consumed so far."""
        return self._count
