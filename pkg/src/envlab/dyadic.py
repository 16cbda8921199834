"""Exact dyadic-rational amounts.

Envelope contents are repeatedly halved and doubled, so amounts are kept
as mantissa * 2**exponent with an integer mantissa.  Halving and
doubling only touch the exponent and therefore never lose precision,
and support queries at y/2, y, 2y stay exact.  Every IEEE double is a
dyadic rational, so conversion from float is lossless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Number = Union[int, float, "DyadicRational"]


@dataclass(frozen=True)
class DyadicRational:
    """Canonical mantissa * 2**exponent with an odd (or zero) mantissa."""

    mantissa: int
    exponent: int = 0

    def __post_init__(self) -> None:
        m, e = self.mantissa, self.exponent
        if m == 0:
            e = 0
        else:
            while m % 2 == 0:
                m //= 2
                e += 1
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    @classmethod
    def from_int(cls, n: int) -> "DyadicRational":
        return cls(n, 0)

    @classmethod
    def from_float(cls, x: float) -> "DyadicRational":
        if not math.isfinite(x):
            raise ValueError(f"cannot represent non-finite value {x!r}")
        num, den = float(x).as_integer_ratio()
        return cls(num, -(den.bit_length() - 1))

    @classmethod
    def coerce(cls, value: Number) -> "DyadicRational":
        if isinstance(value, DyadicRational):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not an amount")
        if isinstance(value, int):
            return cls.from_int(value)
        if isinstance(value, float):
            return cls.from_float(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to DyadicRational")

    def halve(self) -> "DyadicRational":
        if self.mantissa == 0:
            return self
        return DyadicRational(self.mantissa, self.exponent - 1)

    def double(self) -> "DyadicRational":
        if self.mantissa == 0:
            return self
        return DyadicRational(self.mantissa, self.exponent + 1)

    def as_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa * (1 << self.exponent))
        return Fraction(self.mantissa, 1 << (-self.exponent))

    @property
    def is_positive(self) -> bool:
        return self.mantissa > 0

    def __float__(self) -> float:
        return math.ldexp(self.mantissa, self.exponent)

    def _key(self) -> Fraction:
        return self.as_fraction()

    def __lt__(self, other: "DyadicRational") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "DyadicRational") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "DyadicRational") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "DyadicRational") -> bool:
        return self._key() >= other._key()

    def __str__(self) -> str:
        if self.exponent == 0:
            return str(self.mantissa)
        return f"{self.mantissa}*2^{self.exponent}"
