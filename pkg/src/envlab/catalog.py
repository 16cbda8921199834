"""The built-in density catalog.

Eight families: a unit uniform, a Rayleigh-type Weibull, discrete and
continuous heavy-tailed pairs, a decade-piecewise density, a
recursively defined mass sequence, and two improper priors.  Improper
entries are analytic-only and refuse sampling.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Optional, Union

from .density import (
    ContinuousDensity,
    DensitySpec,
    DiscreteDensity,
    Density,
    SamplerPlan,
    cumulative_geometric,
)
from .dyadic import DyadicRational
from .errors import InvalidParameterError, UnknownDensityError

CATALOG_NAMES = (
    "uniform01",
    "rayleigh_half",
    "broome_discrete",
    "broome_continuous",
    "extreme_values",
    "recurrence",
    "improper_exp",
    "power_law",
)

_DESCRIPTIONS = {
    "uniform01": "uniform density 1 on (0, 1]",
    "rayleigh_half": "Weibull(scale 1/2, shape 2): pdf 8x exp(-4x^2) on (0, inf)",
    "broome_discrete": "masses 2^n / 3^(n+1) on amounts 2^n, n >= 0",
    "broome_continuous": "pdf 1/(1+x)^2 on (0, inf)",
    "extreme_values": "pdf 10^-(2k+1) on each decade [10^k, 10^(k+1)), zero below 1",
    "recurrence": "masses p_n = p_(n-1)/2 + 2^-(2n+1) from p_0 = 1/12 on amounts 2^n (sub-normalized, analytic only)",
    "improper_exp": "improper pdf 2^(-4x^2) on (0, inf)",
    "power_law": "improper pdf x^(-n) on (0, inf), integer n >= 1",
}

_PARAM_HINTS = {
    "recurrence": {"max_index": 64},
    "power_law": {"n": "required integer >= 1"},
}


def _require_params(name: str, params: Mapping, allowed: set[str]) -> None:
    extra = set(params) - allowed
    if extra:
        raise InvalidParameterError(f"{name} does not accept params {sorted(extra)}")


def _int_param(name: str, params: Mapping, key: str, default: Optional[int]) -> int:
    if key not in params:
        if default is None:
            raise InvalidParameterError(f"{name} requires integer param {key!r}")
        return default
    value = params[key]
    if isinstance(value, bool):
        raise InvalidParameterError(f"{name} param {key!r} must be an integer")
    if isinstance(value, float):
        if not value.is_integer():
            raise InvalidParameterError(f"{name} param {key!r} must be an integer")
        value = int(value)
    if not isinstance(value, int):
        raise InvalidParameterError(f"{name} param {key!r} must be an integer")
    return value


def _uniform01() -> ContinuousDensity:
    return ContinuousDensity(
        name="uniform01",
        pdf_fn=lambda x: 1.0,
        support=(0.0, 1.0),
        proper=True,
        sampler=SamplerPlan("uniform01"),
        spec=DensitySpec("uniform01", "continuous"),
    )


def _rayleigh_half() -> ContinuousDensity:
    return ContinuousDensity(
        name="rayleigh_half",
        pdf_fn=lambda x: 8.0 * x * math.exp(-4.0 * x * x),
        support=(0.0, math.inf),
        proper=True,
        sampler=SamplerPlan("rayleigh_half"),
        spec=DensitySpec("rayleigh_half", "continuous"),
    )


def _broome_continuous() -> ContinuousDensity:
    return ContinuousDensity(
        name="broome_continuous",
        pdf_fn=lambda x: 1.0 / ((1.0 + x) * (1.0 + x)),
        support=(0.0, math.inf),
        proper=True,
        sampler=SamplerPlan("broome_continuous"),
        spec=DensitySpec("broome_continuous", "continuous"),
    )


def _broome_discrete() -> DiscreteDensity:
    thresholds = cumulative_geometric(2.0 / 3.0)
    pow2 = tuple(float(2**n) for n in range(len(thresholds)))

    def mass_fn(p: DyadicRational) -> Fraction:
        n = p.exponent
        return Fraction(2**n, 3 ** (n + 1))

    return DiscreteDensity(
        name="broome_discrete",
        mass_fn=mass_fn,
        support_fn=lambda p: p.mantissa == 1 and p.exponent >= 0,
        enumerator=lambda limit: (
            (DyadicRational(1, n), Fraction(2**n, 3 ** (n + 1))) for n in range(limit)
        ),
        proper=True,
        sampler=SamplerPlan("broome_discrete", (thresholds, pow2)),
        spec=DensitySpec("broome_discrete", "discrete"),
    )


_DECADE_THRESHOLDS = cumulative_geometric(0.1)
_POW10 = tuple(10.0**k for k in range(len(_DECADE_THRESHOLDS) + 1))


def _decade_index(x: float) -> int:
    """k with 10^k <= x < 10^(k+1), agreeing with float decade bounds."""
    k = int(math.floor(math.log10(x)))
    while 10.0**k > x:
        k -= 1
    while 10.0 ** (k + 1) <= x:
        k += 1
    return k


def _extreme_values() -> ContinuousDensity:
    def pdf_fn(x: float) -> float:
        if x < 1.0:
            return 0.0
        return 10.0 ** (-(2 * _decade_index(x) + 1))

    return ContinuousDensity(
        name="extreme_values",
        pdf_fn=pdf_fn,
        support=(0.0, math.inf),
        proper=True,
        sampler=SamplerPlan("extreme_values", (_DECADE_THRESHOLDS, _POW10)),
        spec=DensitySpec("extreme_values", "continuous"),
    )


def _recurrence(max_index: int) -> DiscreteDensity:
    if max_index < 0:
        raise InvalidParameterError("recurrence max_index must be >= 0")
    masses = [Fraction(1, 12)]
    for n in range(1, max_index + 1):
        masses.append(masses[-1] / 2 + Fraction(1, 1 << (2 * n + 1)))
    table = tuple(masses)

    def mass_fn(p: DyadicRational) -> Fraction:
        return table[p.exponent]

    # The full sequence sums to 1/2, not 1 (solve the recurrence), so
    # this density is analytic-only even before truncation.
    return DiscreteDensity(
        name="recurrence",
        mass_fn=mass_fn,
        support_fn=lambda p: p.mantissa == 1 and 0 <= p.exponent <= max_index,
        enumerator=lambda limit: (
            (DyadicRational(1, n), table[n]) for n in range(min(limit, max_index + 1))
        ),
        proper=False,
        sampler=None,
        spec=DensitySpec("recurrence", "discrete", {"max_index": max_index}),
    )


def _improper_exp() -> ContinuousDensity:
    return ContinuousDensity(
        name="improper_exp",
        pdf_fn=lambda x: 2.0 ** (-4.0 * x * x),
        support=(0.0, math.inf),
        proper=False,
        sampler=None,
        spec=DensitySpec("improper_exp", "continuous", {}, proper=False),
    )


def _power_law(n: int) -> ContinuousDensity:
    if n < 1:
        raise InvalidParameterError("power_law requires integer n >= 1")

    def pdf_fn(x: float) -> float:
        try:
            return x ** (-n)
        except OverflowError:
            return math.inf

    return ContinuousDensity(
        name="power_law",
        pdf_fn=pdf_fn,
        support=(0.0, math.inf),
        proper=False,
        sampler=None,
        spec=DensitySpec("power_law", "continuous", {"n": n}, proper=False),
    )


def catalog_lookup(name: str, params: Optional[Mapping[str, Union[int, float]]] = None) -> Density:
    """Build a catalog density by name."""
    params = dict(params or {})
    if name == "uniform01":
        _require_params(name, params, set())
        return _uniform01()
    if name == "rayleigh_half":
        _require_params(name, params, set())
        return _rayleigh_half()
    if name == "broome_discrete":
        _require_params(name, params, set())
        return _broome_discrete()
    if name == "broome_continuous":
        _require_params(name, params, set())
        return _broome_continuous()
    if name == "extreme_values":
        _require_params(name, params, set())
        return _extreme_values()
    if name == "recurrence":
        _require_params(name, params, {"max_index"})
        return _recurrence(_int_param(name, params, "max_index", 64))
    if name == "improper_exp":
        _require_params(name, params, set())
        return _improper_exp()
    if name == "power_law":
        _require_params(name, params, {"n"})
        return _power_law(_int_param(name, params, "n", None))
    raise UnknownDensityError(name)


def catalog_entries() -> list[dict]:
    """Summaries of every catalog family for the CLI and the API."""
    out = []
    for name in CATALOG_NAMES:
        probe_params = {"n": 1} if name == "power_law" else {}
        density = catalog_lookup(name, probe_params)
        out.append(
            {
                "name": name,
                "kind": density.kind,
                "proper": density.proper,
                "params": _PARAM_HINTS.get(name, {}),
                "description": _DESCRIPTIONS[name],
            }
        )
    return out
