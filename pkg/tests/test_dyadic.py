import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from envlab.dyadic import DyadicRational


def test_canonical_form_odd_or_zero_mantissa():
    d = DyadicRational(12, 3)
    assert d.mantissa == 3
    assert d.exponent == 5
    assert DyadicRational(0, 7) == DyadicRational(0, 0)


def test_from_float_exact():
    d = DyadicRational.from_float(0.3)
    assert float(d) == 0.3
    assert d.as_fraction() == Fraction(0.3)


def test_from_float_rejects_non_finite():
    with pytest.raises(ValueError):
        DyadicRational.from_float(math.inf)
    with pytest.raises(ValueError):
        DyadicRational.from_float(math.nan)


def test_coerce_accepts_int_float_dyadic():
    assert DyadicRational.coerce(6) == DyadicRational(3, 1)
    assert DyadicRational.coerce(1.5) == DyadicRational(3, -1)
    d = DyadicRational(5, -2)
    assert DyadicRational.coerce(d) is d


def test_halve_double_shift_exponent():
    d = DyadicRational(5, 0)
    assert d.halve() == DyadicRational(5, -1)
    assert d.double() == DyadicRational(5, 1)
    zero = DyadicRational(0)
    assert zero.halve() == zero
    assert zero.double() == zero


def test_ordering_and_str():
    assert DyadicRational(1, -1) < DyadicRational(3, -2) < DyadicRational(1, 0)
    assert str(DyadicRational(5, -2)) == "5*2^-2"


finite = st.floats(
    min_value=1e-12, max_value=1e12, allow_nan=False, allow_infinity=False
)


@given(finite)
def test_float_round_trip(x):
    assert float(DyadicRational.from_float(x)) == x


@given(st.integers(-(2**40), 2**40), st.integers(-30, 30))
def test_halve_then_double_is_identity(m, e):
    d = DyadicRational(m, e)
    assert d.halve().double() == d
    assert d.double().halve() == d


@given(st.integers(-(2**40), 2**40), st.integers(-30, 30))
def test_as_fraction_matches_ldexp(m, e):
    d = DyadicRational(m, e)
    assert d.as_fraction() == Fraction(d.mantissa) * Fraction(2) ** d.exponent
