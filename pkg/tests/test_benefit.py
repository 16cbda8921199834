import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from envlab.benefit import (
    Bounds,
    Decision,
    decide,
    exchange_condition,
    expected_benefit,
    expected_benefit_continuous,
    expected_benefit_discrete,
    find_exchange_roots,
    make_report,
    strategy,
)
from envlab.catalog import catalog_lookup
from envlab.density import DiscreteDensity, piecewise_constant
from envlab.errors import (
    InvalidIntervalError,
    NonpositiveAmountError,
    OutOfBoundsError,
)
from envlab.host import ALL_PROCESSES, Process

UNIFORM = catalog_lookup("uniform01", {})
RAYLEIGH = catalog_lookup("rayleigh_half", {})
BROOME_D = catalog_lookup("broome_discrete", {})
BROOME_C = catalog_lookup("broome_continuous", {})
EXTREME = catalog_lookup("extreme_values", {})
RECURRENCE = catalog_lookup("recurrence", {})
IMPROPER_EXP = catalog_lookup("improper_exp", {})


def test_decide_thresholds():
    assert decide(1e-11) is Decision.SWITCH
    assert decide(-1e-11) is Decision.STAY
    assert decide(5e-13) is Decision.INDIFFERENT
    assert decide(0.0) is Decision.INDIFFERENT


def test_make_report_zero_denominator():
    report = make_report(3.0, 0.0, 0.0)
    assert report.attainable is False
    assert report.decision is Decision.INDIFFERENT
    assert report.to_dict()["expected_benefit"] is None


def test_bounds_validation():
    with pytest.raises(ValueError):
        Bounds(-0.1, 1.0)
    with pytest.raises(ValueError):
        Bounds(1.0, 1.0)
    with pytest.raises(ValueError):
        Bounds(None, 0.0)
    Bounds(None, None)  # both optional


def test_nonpositive_y_rejected():
    with pytest.raises(NonpositiveAmountError):
        expected_benefit(UNIFORM, Process.DOUBLE_ONLY, 0.0)
    with pytest.raises(NonpositiveAmountError):
        expected_benefit(BROOME_D, Process.DOUBLE_ONLY, -2)


def test_uniform_halve_or_double_is_half_y():
    for y in (0.1, 0.25, 0.3, 0.49):
        report = expected_benefit_continuous(UNIFORM, Process.HALVE_OR_DOUBLE, y)
        assert abs(report.expected_benefit - y / 2) <= 1e-12
        assert report.decision is Decision.SWITCH


def test_broome_discrete_tenth_of_y_exactly():
    for n in range(1, 21):
        y = 2**n
        report = expected_benefit_discrete(BROOME_D, Process.DOUBLE_ONLY, y)
        assert report.attainable
        assert report.expected_benefit == y / 10
        assert report.expected_benefit > 0


def test_broome_discrete_support_edge():
    # P(1/2) = 0, so at y=1 only the undoubled event remains
    report = expected_benefit_discrete(BROOME_D, Process.DOUBLE_ONLY, 1)
    assert report.numerator == pytest.approx(float(Fraction(1, 3)))
    assert report.denominator == pytest.approx(float(Fraction(1, 3)))
    assert report.expected_benefit == 1.0


def test_broome_discrete_off_grid_unattainable():
    report = expected_benefit(BROOME_D, Process.DOUBLE_ONLY, 3.0)
    assert report.attainable is False
    assert report.decision is Decision.INDIFFERENT


def test_broome_continuous_closed_form():
    for y in (0.2, 1.0, 7.5, 120.0):
        report = expected_benefit_continuous(BROOME_C, Process.DOUBLE_ONLY, y)
        target = (2 * y * y + 3 * y) / (3 * y * y + 8 * y + 6)
        assert abs(report.expected_benefit - target) <= 1e-12
        assert report.expected_benefit > 0
    at_one = expected_benefit_continuous(BROOME_C, Process.DOUBLE_ONLY, 1.0)
    assert at_one.expected_benefit == pytest.approx(5 / 17, abs=1e-15)


def test_extreme_values_halving_bands():
    for k in (0, 1, 2):
        lo = 10.0**k
        for y in (lo * 1.3, lo * 2.6, lo * 4.9):   # both +y/2 bands
            report = expected_benefit_continuous(EXTREME, Process.HALVE_ONLY, y)
            assert abs(report.expected_benefit - y / 2) <= 1e-12
        for y in (lo * 5.0, lo * 7.5, lo * 9.9):   # top band
            report = expected_benefit_continuous(EXTREME, Process.HALVE_ONLY, y)
            assert abs(report.expected_benefit - (-(24 / 51) * y)) <= 1e-12


def test_recurrence_closed_form_exact():
    for k in range(0, 21):
        y = 2 ** (k + 1)
        p_k = RECURRENCE.mass(2**k)
        target = Fraction(1, 2 ** (k + 1)) / (3 * p_k + Fraction(1, 2 ** (2 * (k + 1))))
        report = expected_benefit_discrete(RECURRENCE, Process.DOUBLE_ONLY, y)
        assert report.expected_benefit == float(target)
        assert report.expected_benefit > 0


def test_allocate_first_is_quarter_y_for_any_density():
    for density in (UNIFORM, BROOME_D, RECURRENCE, IMPROPER_EXP):
        for y in (0.3, 4.0, 12.0):
            report = expected_benefit(density, Process.ALLOCATE_FIRST_THEN_PRIME, y)
            assert report.attainable
            assert abs(report.expected_benefit - y / 4) <= 1e-12
    assert expected_benefit(UNIFORM, Process.ALLOCATE_FIRST_THEN_PRIME, 12.0).expected_benefit == 3.0


def test_power_law_decision_by_exponent():
    expectations = {1: Decision.SWITCH, 2: Decision.INDIFFERENT, 3: Decision.STAY}
    for n, wanted in expectations.items():
        density = catalog_lookup("power_law", {"n": n})
        for y in (0.4, 1.0, 9.0):
            report = expected_benefit_continuous(density, Process.DOUBLE_ONLY, y)
            assert report.decision is wanted
    # n = 3 closed form: E = y(2-4)/(2+8) = -y/5
    density = catalog_lookup("power_law", {"n": 3})
    report = expected_benefit_continuous(density, Process.DOUBLE_ONLY, 2.5)
    assert report.expected_benefit == pytest.approx(-0.5, abs=1e-12)


def test_scaling_invariance():
    for c in (0.5, 3.0, 100.0):
        scaled_c = BROOME_C.scaled(c)
        scaled_d = BROOME_D.scaled(c)
        for y in (0.7, 2.0):
            base = expected_benefit(BROOME_C, Process.DOUBLE_ONLY, y)
            scaled = expected_benefit(scaled_c, Process.DOUBLE_ONLY, y)
            assert scaled.decision is base.decision
            assert scaled.expected_benefit == pytest.approx(base.expected_benefit, rel=1e-12)
        for y in (2.0, 8.0):
            base = expected_benefit(BROOME_D, Process.DOUBLE_ONLY, y)
            scaled = expected_benefit(scaled_d, Process.DOUBLE_ONLY, y)
            assert scaled.decision is base.decision
            assert scaled.expected_benefit == pytest.approx(base.expected_benefit, rel=1e-12)


def test_exchange_condition_sign_and_roots():
    # e(y) carries the sign of 8 exp(-3y^2) - 1 for the Weibull prior
    for y in (0.5, 0.83, 0.9):
        e = exchange_condition(RAYLEIGH, Process.DOUBLE_ONLY, y)
        assert (e > 0) == (8 * math.exp(-3 * y * y) - 1 > 0)
    assert exchange_condition(UNIFORM, Process.ALLOCATE_FIRST_THEN_PRIME, 4.0) == 1.0


def test_weibull_roots():
    roots = find_exchange_roots(RAYLEIGH, Process.DOUBLE_ONLY, (0.1, 2.0), tol=1e-9)
    assert len(roots) == 1
    assert abs(roots[0] - math.sqrt(math.log(2))) < 1e-6
    roots2 = find_exchange_roots(RAYLEIGH, Process.HALVE_OR_DOUBLE, (0.1, 2.0), tol=1e-9)
    assert len(roots2) == 1
    assert abs(roots2[0] - 0.686511) < 1e-4


def test_improper_exp_root():
    roots = find_exchange_roots(IMPROPER_EXP, Process.DOUBLE_ONLY, (0.1, 2.0), tol=1e-10)
    assert len(roots) == 1
    assert abs(roots[0] - math.sqrt(2 / 3)) < 1e-9
    # e vanishes at the symbolic root itself
    assert abs(exchange_condition(IMPROPER_EXP, Process.DOUBLE_ONLY, math.sqrt(2 / 3))) < 1e-12


def test_root_certificates():
    tol = 1e-9
    cases = [
        (RAYLEIGH, Process.DOUBLE_ONLY, (0.1, 2.0)),
        (RAYLEIGH, Process.HALVE_OR_DOUBLE, (0.1, 2.0)),
        (IMPROPER_EXP, Process.DOUBLE_ONLY, (0.1, 2.0)),
    ]
    for density, process, interval in cases:
        for r in find_exchange_roots(density, process, interval, tol=tol):
            lo = exchange_condition(density, process, r - tol)
            hi = exchange_condition(density, process, r + tol)
            assert lo * hi <= 0


def test_no_roots_on_positive_stretch():
    # uniform halve-or-double numerator is 4.5y below 1/2: no zero
    assert find_exchange_roots(UNIFORM, Process.HALVE_OR_DOUBLE, (0.01, 0.49)) == []


def test_find_roots_interval_validation():
    with pytest.raises(InvalidIntervalError):
        find_exchange_roots(UNIFORM, Process.DOUBLE_ONLY, (0.5, 0.5))
    with pytest.raises(InvalidIntervalError):
        find_exchange_roots(UNIFORM, Process.DOUBLE_ONLY, (-1.0, 1.0))
    with pytest.raises(InvalidIntervalError):
        find_exchange_roots(UNIFORM, Process.DOUBLE_ONLY, (0.1, 1.0), cells=0)
    with pytest.raises(InvalidIntervalError):
        find_exchange_roots(UNIFORM, Process.DOUBLE_ONLY, (0.1, 1.0), tol=0.0)


def test_strategy_bands_uniform():
    bounds = Bounds(0.0, 1.0)
    decision, value = strategy(UNIFORM, Process.HALVE_OR_DOUBLE, bounds, 0.3)
    assert decision is Decision.SWITCH
    assert value == pytest.approx(0.15, abs=1e-12)
    decision, value = strategy(UNIFORM, Process.HALVE_OR_DOUBLE, bounds, 0.8)
    assert (decision, value) == (Decision.STAY, -0.4)


def test_strategy_low_band_switch_value_is_y():
    bounds = Bounds(0.2, 10.0)
    decision, value = strategy(UNIFORM, Process.HALVE_OR_DOUBLE, bounds, 0.3)
    # y < 2 x_l: certain gain of y
    assert (decision, value) == (Decision.SWITCH, 0.3)


def test_strategy_boundaries_use_formula():
    bounds = Bounds(0.1, 1.0)
    for y in (0.2, 0.5):    # y = 2 x_l and y = x_u / 2
        decision, value = strategy(UNIFORM, Process.HALVE_OR_DOUBLE, bounds, y)
        report = expected_benefit(UNIFORM, Process.HALVE_OR_DOUBLE, y)
        assert decision is report.decision
        assert value == report.expected_benefit


def test_strategy_without_bounds_is_pure_formula():
    decision, value = strategy(
        catalog_lookup("power_law", {"n": 3}), Process.DOUBLE_ONLY, Bounds(), 7.0
    )
    assert decision is Decision.STAY
    assert value == pytest.approx(-7.0 / 5, abs=1e-12)


def test_strategy_out_of_bounds():
    bounds = Bounds(0.1, 1.0)
    with pytest.raises(OutOfBoundsError):
        strategy(UNIFORM, Process.HALVE_OR_DOUBLE, bounds, 0.05)
    with pytest.raises(OutOfBoundsError):
        strategy(UNIFORM, Process.HALVE_OR_DOUBLE, bounds, 1.5)


def test_allocate_second_switch_criterion_continuous():
    for y in (0.2, 0.6, 1.4, 3.0):
        report = expected_benefit_continuous(BROOME_C, Process.PRIME_SECOND_THEN_ALLOCATE, y)
        should_switch = 8 * BROOME_C.pdf(2 * y) > BROOME_C.pdf(y / 2)
        if report.attainable and report.decision is not Decision.INDIFFERENT:
            assert (report.decision is Decision.SWITCH) == should_switch


def test_allocate_second_switch_criterion_discrete():
    for y in (2.0, 8.0, 32.0):
        report = expected_benefit_discrete(BROOME_D, Process.PRIME_SECOND_THEN_ALLOCATE, y)
        should_switch = 2 * BROOME_D.mass(2 * y) > BROOME_D.mass(y / 2)
        if report.attainable and report.decision is not Decision.INDIFFERENT:
            assert (report.decision is Decision.SWITCH) == should_switch


def test_piecewise_density_reports():
    d = piecewise_constant([0.0, 1.0, 2.0], [0.25, 0.75])
    report = expected_benefit(d, Process.DOUBLE_ONLY, 1.2)
    # f(0.6) = 0.25, f(1.2) = 0.75
    num = -(0.6) * 0.25 + 2 * 1.2 * 0.75
    den = 0.25 + 2 * 0.75
    assert report.expected_benefit == pytest.approx(num / den, abs=1e-15)


@settings(max_examples=200)
@given(
    st.sampled_from(ALL_PROCESSES),
    st.floats(min_value=0.01, max_value=0.97, allow_nan=False),
)
def test_sign_agreement_uniform(process, y):
    report = expected_benefit(UNIFORM, process, y)
    if not report.attainable:
        return
    e = exchange_condition(UNIFORM, process, y)
    if report.decision is Decision.SWITCH:
        assert e > 0
    elif report.decision is Decision.STAY:
        assert e < 0


@given(st.floats(min_value=0.05, max_value=50.0, allow_nan=False))
def test_attainable_reports_divide_exactly(y):
    report = expected_benefit(BROOME_C, Process.HALVE_OR_DOUBLE, y)
    assert report.attainable
    assert report.expected_benefit == pytest.approx(
        report.numerator / report.denominator, rel=1e-15
    )
