import json
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from envlab.catalog import CATALOG_NAMES, catalog_entries, catalog_lookup
from envlab.density import (
    DensitySpec,
    DiscreteDensity,
    build_density,
    density_from_json,
    piecewise_constant,
    sample,
    spec_of,
)
from envlab.errors import (
    ImproperDensityError,
    InvalidParameterError,
    UnknownDensityError,
)
from envlab.rng import SplitMix64


def test_catalog_has_eight_densities():
    assert len(CATALOG_NAMES) == 8
    assert len(catalog_entries()) == 8


def test_unknown_name_raises():
    with pytest.raises(UnknownDensityError):
        catalog_lookup("gaussian", {})


def test_power_law_requires_integer_n():
    with pytest.raises(InvalidParameterError):
        catalog_lookup("power_law", {})
    with pytest.raises(InvalidParameterError):
        catalog_lookup("power_law", {"n": 0})
    with pytest.raises(InvalidParameterError):
        catalog_lookup("power_law", {"n": 1.5})
    assert catalog_lookup("power_law", {"n": 3}).proper is False


def test_uniform01_pdf():
    d = catalog_lookup("uniform01", {})
    assert d.pdf(0.5) == 1.0
    assert d.pdf(1.0) == 1.0
    # support is the half-open interval (0, 1]
    assert d.pdf(0.0) == 0.0
    assert d.pdf(1.0000001) == 0.0


def test_rayleigh_half_pdf_and_mean():
    d = catalog_lookup("rayleigh_half", {})
    x = 0.3
    assert d.pdf(x) == pytest.approx(8 * x * math.exp(-4 * x * x), rel=1e-15)
    rng = SplitMix64(11)
    n = 200_000
    xs = [sample(d, rng) for _ in range(n)]
    mean = sum(xs) / n
    var = sum((v - mean) ** 2 for v in xs) / (n - 1)
    se = math.sqrt(var / n)
    # Weibull(1/2, 2) mean is sqrt(pi)/4
    assert abs(mean - math.sqrt(math.pi) / 4) < 3 * se


def test_broome_discrete_masses_are_exact():
    d = catalog_lookup("broome_discrete", {})
    assert d.mass(1) == Fraction(1, 3)
    assert d.mass(2) == Fraction(2, 9)
    assert d.mass(4) == Fraction(4, 27)
    assert d.mass(3) == 0
    assert d.mass(0.5) == 0
    # partial sums approach 1: sum_{n<=N} 2^n/3^(n+1) = 1 - (2/3)^(N+1)
    pts = d.points(40)
    total = sum(m for _, m in pts)
    assert total == 1 - Fraction(2, 3) ** 40


def test_recurrence_masses_and_subnormalization():
    d = catalog_lookup("recurrence", {})
    assert d.proper is False
    assert d.mass(1) == Fraction(1, 12)
    assert d.mass(2) == Fraction(1, 6)
    # p_n = p_{n-1}/2 + 2^{-(2n+1)}
    prev = Fraction(1, 12)
    for n in range(1, 30):
        expect = prev / 2 + Fraction(1, 2 ** (2 * n + 1))
        assert d.mass(2**n) == expect
        prev = expect
    # the full series sums to 1/2, so the density is analytic-only
    total = sum(m for _, m in d.points(64))
    assert abs(float(total) - 0.5) < 1e-15


def test_extreme_values_pdf_decades():
    d = catalog_lookup("extreme_values", {})
    assert d.pdf(0.5) == 0.0
    assert d.pdf(5.0) == pytest.approx(10.0**-1)
    assert d.pdf(50.0) == pytest.approx(10.0**-3)
    assert d.pdf(500.0) == pytest.approx(10.0**-5)
    # decade k carries mass 9*10^k * 10^{-(2k+1)} = 0.9 * 10^{-k}; total 1
    total = sum(9 * 10.0**k * d.pdf(1.5 * 10.0**k) for k in range(30))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_broome_continuous_pdf():
    d = catalog_lookup("broome_continuous", {})
    assert d.pdf(1.0) == pytest.approx(0.25)
    assert d.pdf(3.0) == pytest.approx(1 / 16)


def test_improper_exp_pdf():
    d = catalog_lookup("improper_exp", {})
    assert d.proper is False
    assert d.pdf(0.5) == pytest.approx(2.0 ** (-1.0))


def test_spec_round_trip_bit_exact_all_catalog():
    for name in CATALOG_NAMES:
        params = {"n": 2} if name == "power_law" else {}
        d = catalog_lookup(name, params)
        spec = spec_of(d)
        rebuilt = build_density(DensitySpec.from_json(spec.to_json()))
        assert rebuilt.kind == d.kind
        assert rebuilt.proper == d.proper
        if d.kind == "continuous":
            for i in range(100):
                x = 0.01 + 0.37 * i
                assert rebuilt.pdf(x) == d.pdf(x)
        else:
            for p, m in d.points(30):
                assert rebuilt.mass(p) == m


def test_piecewise_round_trip_and_pdf():
    d = piecewise_constant([0.0, 1.0, 2.0], [0.25, 0.75])
    assert d.proper is True
    assert d.pdf(0.5) == 0.25
    assert d.pdf(1.5) == 0.75
    assert d.pdf(2.0) == 0.75
    assert d.pdf(2.5) == 0.0
    assert d.pdf(0.0) == 0.0    # lower edge excluded
    rebuilt = density_from_json(spec_of(d).to_json())
    for i in range(100):
        x = 0.02 * i
        assert rebuilt.pdf(x) == d.pdf(x)


def test_piecewise_validation():
    with pytest.raises(InvalidParameterError):
        piecewise_constant([0.0, 1.0], [0.5, 0.5])     # count mismatch
    with pytest.raises(InvalidParameterError):
        piecewise_constant([1.0, 0.5], [1.0])          # not increasing
    with pytest.raises(InvalidParameterError):
        piecewise_constant([0.0, 1.0], [-1.0])         # negative value
    with pytest.raises(InvalidParameterError):
        piecewise_constant([0.0, 1.0], [0.5], proper=True)  # mass 0.5 declared proper


def test_spec_from_dict_validation():
    with pytest.raises(InvalidParameterError):
        DensitySpec.from_dict({"name": "uniform01"})
    with pytest.raises(InvalidParameterError):
        DensitySpec.from_dict({"name": "uniform01", "kind": "nonsense"})
    with pytest.raises(InvalidParameterError):
        build_density(DensitySpec.from_dict({"name": "uniform01", "kind": "discrete"}))


def test_sampler_determinism_and_lockstep():
    d = catalog_lookup("uniform01", {})
    assert sample(d, SplitMix64(3)) == sample(d, SplitMix64(3))
    rng1, rng2 = SplitMix64(9), SplitMix64(9)
    xs = [sample(d, rng1) for _ in range(100)]
    ys = [sample(d, rng2) for _ in range(100)]
    assert xs == ys


def test_discrete_sampler_lands_on_support():
    d = catalog_lookup("broome_discrete", {})
    rng = SplitMix64(5)
    for _ in range(1000):
        x = sample(d, rng)
        assert d.support_query(x)


def test_extreme_values_sampler_consumes_two_uniforms():
    d = catalog_lookup("extreme_values", {})
    rng = SplitMix64(2)
    sample(d, rng)
    assert rng.draws == 2


def test_improper_densities_refuse_sampling():
    rng = SplitMix64(0)
    for name, params in (("recurrence", {}), ("improper_exp", {}), ("power_law", {"n": 2})):
        with pytest.raises(ImproperDensityError):
            sample(catalog_lookup(name, params), rng)


def test_from_table_and_scaling():
    d = DiscreteDensity.from_table("pair", {1: Fraction(1, 4), 2: Fraction(3, 4)})
    assert d.proper is True
    assert d.mass(1) == Fraction(1, 4)
    s = d.scaled(3.0)
    assert s.proper is False
    assert s.mass(2) == Fraction(3, 4) * 3.0
    with pytest.raises(InvalidParameterError):
        d.scaled(0)


@given(st.floats(min_value=1e-6, max_value=0.999999, allow_nan=False))
def test_uniform01_sampler_range(u):
    d = catalog_lookup("uniform01", {})
    x = d.sampler.draw([u])
    assert 0.0 < x <= 1.0


def test_catalog_entries_are_json_serializable():
    text = json.dumps(catalog_entries())
    assert "uniform01" in text
