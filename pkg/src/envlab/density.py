"""Prior densities for the initial amount.

A density is either discrete on a dyadic grid or continuous on an
interval, may be improper (unnormalized; analytic use only), and may
carry a sampler.  Samplers are described by declarative plans (an
inverse-transform family plus precomputed threshold tables) so the
scalar path here and the batch kernels in envlab.kernels consume the
identical uniform stream and produce the identical draws.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .dyadic import DyadicRational
from .errors import ImproperDensityError, InvalidParameterError
from .rng import SplitMix64

MassValue = Union[Fraction, float, int]

# Smallest positive normal double; draws are clamped to it so an
# envelope amount can never be exactly zero.  The same literal appears
# in both simulation kernels.
TINY_AMOUNT = 2.2250738585072014e-308

SAMPLER_FAMILIES = (
    "uniform01",
    "rayleigh_half",
    "broome_continuous",
    "broome_discrete",
    "extreme_values",
    "piecewise",
)

_UNIFORMS_PER_DRAW = {
    "uniform01": 1,
    "rayleigh_half": 1,
    "broome_continuous": 1,
    "broome_discrete": 1,
    "extreme_values": 2,
    "piecewise": 1,
}


def cumulative_geometric(ratio: float) -> tuple[float, ...]:
    """Thresholds t_n = 1 - ratio**(n+1), extended until t_n == 1.0.

    Built by repeated multiplication so every backend sees the same
    float values.
    """
    if not 0.0 < ratio < 1.0:
        raise InvalidParameterError(f"ratio must be in (0,1), got {ratio}")
    out = []
    c = 1.0
    while True:
        c *= ratio
        t = 1.0 - c
        out.append(t)
        if t == 1.0:
            return tuple(out)


def _scan(thresholds: Sequence[float], u: float) -> int:
    """First index j with u < thresholds[j] (thresholds end at 1.0)."""
    j = 0
    while u >= thresholds[j]:
        j += 1
    return j


@dataclass(frozen=True)
class SamplerPlan:
    """Inverse-transform recipe understood by all backends."""

    family: str
    tables: tuple[tuple[float, ...], ...] = ()

    def __post_init__(self) -> None:
        if self.family not in SAMPLER_FAMILIES:
            raise InvalidParameterError(f"unknown sampler family {self.family!r}")

    @property
    def uniforms_per_draw(self) -> int:
        return _UNIFORMS_PER_DRAW[self.family]

    def draw(self, uniforms: Sequence[float]) -> float:
        """One draw from the given uniforms in [0, 1)."""
        fam = self.family
        if fam == "uniform01":
            x = 1.0 - uniforms[0]
        elif fam == "rayleigh_half":
            x = 0.5 * math.sqrt(-math.log1p(-uniforms[0]))
        elif fam == "broome_continuous":
            u = uniforms[0]
            x = u / (1.0 - u)
        elif fam == "broome_discrete":
            thresholds, pow2 = self.tables
            x = pow2[_scan(thresholds, uniforms[0])]
        elif fam == "extreme_values":
            thresholds, pow10 = self.tables
            k = _scan(thresholds, uniforms[0])
            x = pow10[k] * (1.0 + 9.0 * uniforms[1])
        else:  # piecewise
            cum, breakpoints, values = self.tables
            t = uniforms[0] * cum[-1]
            j = _scan(cum, t)
            prev = cum[j - 1] if j > 0 else 0.0
            x = breakpoints[j] + (t - prev) / values[j]
        return x if x > 0.0 else TINY_AMOUNT


@dataclass(frozen=True)
class DensitySpec:
    """Serializable description of a density.

    `proper` matters only for custom piecewise densities; catalog
    families carry their own flag and ignore it.
    """

    name: str
    kind: str
    params: Mapping[str, Union[int, float]] = field(default_factory=dict)
    breakpoints: Optional[tuple[float, ...]] = None
    values: Optional[tuple[float, ...]] = None
    proper: bool = True

    def to_dict(self) -> dict:
        out: dict = {"name": self.name, "kind": self.kind, "params": dict(self.params)}
        if self.breakpoints is not None:
            out["breakpoints"] = list(self.breakpoints)
        if self.values is not None:
            out["values"] = list(self.values)
        if not self.proper:
            out["proper"] = False
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "DensitySpec":
        if not isinstance(data, Mapping):
            raise InvalidParameterError("density spec must be an object")
        unknown = set(data) - {"name", "kind", "params", "breakpoints", "values", "proper"}
        if unknown:
            raise InvalidParameterError(f"unknown spec fields: {sorted(unknown)}")
        name = data.get("name")
        kind = data.get("kind")
        if not isinstance(name, str) or not name:
            raise InvalidParameterError("spec requires a string 'name'")
        if kind not in ("discrete", "continuous"):
            raise InvalidParameterError("spec 'kind' must be 'discrete' or 'continuous'")
        params = data.get("params", {})
        if not isinstance(params, Mapping):
            raise InvalidParameterError("spec 'params' must be an object of numbers")
        for key, value in params.items():
            if not isinstance(key, str) or isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidParameterError("spec 'params' must map strings to numbers")
        proper = data.get("proper", True)
        if not isinstance(proper, bool):
            raise InvalidParameterError("spec 'proper' must be a boolean")
        breakpoints = data.get("breakpoints")
        values = data.get("values")
        for label, seq in (("breakpoints", breakpoints), ("values", values)):
            if seq is None:
                continue
            if not isinstance(seq, Sequence) or isinstance(seq, (str, bytes)):
                raise InvalidParameterError(f"spec '{label}' must be an array of numbers")
            for value in seq:
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise InvalidParameterError(f"spec '{label}' must contain only numbers")
        return cls(
            name=name,
            kind=kind,
            params=dict(params),
            breakpoints=None if breakpoints is None else tuple(float(b) for b in breakpoints),
            values=None if values is None else tuple(float(v) for v in values),
            proper=proper,
        )

    @classmethod
    def from_json(cls, text: str) -> "DensitySpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidParameterError(f"invalid JSON density spec: {exc}") from exc
        return cls.from_dict(data)


@dataclass(frozen=True)
class DiscreteDensity:
    """Probability mass on dyadic-rational support points."""

    name: str
    mass_fn: Callable[[DyadicRational], MassValue] = field(repr=False)
    support_fn: Callable[[DyadicRational], bool] = field(repr=False)
    enumerator: Optional[Callable[[int], Iterable[tuple[DyadicRational, MassValue]]]] = field(
        default=None, repr=False
    )
    proper: bool = True
    sampler: Optional[SamplerPlan] = None
    spec: Optional[DensitySpec] = None

    kind = "discrete"

    def support_query(self, point) -> bool:
        return self.support_fn(DyadicRational.coerce(point))

    def mass(self, point) -> MassValue:
        p = DyadicRational.coerce(point)
        if not self.support_fn(p):
            return Fraction(0)
        return self.mass_fn(p)

    def points(self, limit: int) -> list[tuple[DyadicRational, MassValue]]:
        """Up to `limit` (point, mass) pairs in enumeration order."""
        if self.enumerator is None:
            raise InvalidParameterError(f"density {self.name!r} has no enumerator")
        out = []
        for pair in self.enumerator(limit):
            out.append(pair)
            if len(out) >= limit:
                break
        return out

    def scaled(self, c: float) -> "DiscreteDensity":
        """Copy with every mass multiplied by c (analytic use only)."""
        if c <= 0:
            raise InvalidParameterError("scale factor must be positive")
        if c == 1:
            return self
        base_mass, base_enum = self.mass_fn, self.enumerator
        scaled_enum = None
        if base_enum is not None:
            def scaled_enum(limit, _e=base_enum):  # noqa: E731 - closure over base
                return ((p, m * c) for p, m in _e(limit))
        return DiscreteDensity(
            name=f"{self.name}*{c:g}",
            mass_fn=lambda p: base_mass(p) * c,
            support_fn=self.support_fn,
            enumerator=scaled_enum,
            proper=False,
            sampler=None,
            spec=None,
        )

    @classmethod
    def from_table(
        cls,
        name: str,
        table: Mapping,
        proper: Optional[bool] = None,
    ) -> "DiscreteDensity":
        """Finite density from a {point: mass} mapping."""
        masses: dict[DyadicRational, MassValue] = {}
        for point, mass in table.items():
            p = DyadicRational.coerce(point)
            if not p.is_positive:
                raise InvalidParameterError("support points must be positive")
            if mass < 0:
                raise InvalidParameterError("masses must be nonnegative")
            masses[p] = mass
        if not masses or not any(m > 0 for m in masses.values()):
            raise InvalidParameterError("table density needs positive total mass")
        if proper is None:
            total = sum(masses.values())
            proper = abs(total - 1) <= 1e-9
        ordered = sorted(masses.items(), key=lambda kv: kv[0].as_fraction())
        return cls(
            name=name,
            mass_fn=lambda p: masses.get(p, Fraction(0)),
            support_fn=lambda p: p in masses,
            enumerator=lambda limit: iter(ordered[:limit]),
            proper=proper,
            sampler=None,
            spec=None,
        )


@dataclass(frozen=True)
class ContinuousDensity:
    """Density on an interval (lower, upper]; bounds may be infinite."""

    name: str
    pdf_fn: Callable[[float], float] = field(repr=False)
    support: tuple[float, float] = (0.0, math.inf)
    proper: bool = True
    sampler: Optional[SamplerPlan] = None
    spec: Optional[DensitySpec] = None

    kind = "continuous"

    def pdf(self, x: float) -> float:
        lo, hi = self.support
        if not (lo < x <= hi):
            return 0.0
        return self.pdf_fn(x)

    def scaled(self, c: float) -> "ContinuousDensity":
        """Copy with the pdf multiplied by c (analytic use only)."""
        if c <= 0:
            raise InvalidParameterError("scale factor must be positive")
        if c == 1:
            return self
        base = self.pdf_fn
        return ContinuousDensity(
            name=f"{self.name}*{c:g}",
            pdf_fn=lambda x: base(x) * c,
            support=self.support,
            proper=False,
            sampler=None,
            spec=None,
        )


Density = Union[DiscreteDensity, ContinuousDensity]


def piecewise_constant(
    breakpoints: Sequence[float],
    values: Sequence[float],
    proper: Optional[bool] = None,
) -> ContinuousDensity:
    """pdf = values[i] on (breakpoints[i], breakpoints[i+1]].

    With proper left unspecified it is inferred from the total mass;
    declaring proper=True for a total that is not 1 within 1e-9 is an
    error, because the sampler would silently skew.
    """
    bp = tuple(float(b) for b in breakpoints)
    vals = tuple(float(v) for v in values)
    if len(bp) < 2 or len(vals) != len(bp) - 1:
        raise InvalidParameterError("need k+1 breakpoints for k values")
    if bp[0] < 0:
        raise InvalidParameterError("breakpoints must be nonnegative")
    if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
        raise InvalidParameterError("breakpoints must be strictly increasing")
    if any(v < 0 for v in vals) or not any(v > 0 for v in vals):
        raise InvalidParameterError("values must be nonnegative with positive total")

    cum = []
    acc = 0.0
    for i, v in enumerate(vals):
        acc += v * (bp[i + 1] - bp[i])
        cum.append(acc)
    total = cum[-1]
    if proper is None:
        proper = abs(total - 1.0) <= 1e-9
    elif proper and abs(total - 1.0) > 1e-9:
        raise InvalidParameterError(f"declared proper but total mass is {total!r}")

    def pdf_fn(x: float) -> float:
        if x <= bp[0] or x > bp[-1]:
            return 0.0
        return vals[bisect_left(bp, x) - 1]

    plan = SamplerPlan("piecewise", (tuple(cum), bp, vals)) if proper else None
    spec = DensitySpec(
        name="piecewise",
        kind="continuous",
        params={},
        breakpoints=bp,
        values=vals,
        proper=proper,
    )
    return ContinuousDensity(
        name="piecewise",
        pdf_fn=pdf_fn,
        support=(bp[0], bp[-1]),
        proper=proper,
        sampler=plan,
        spec=spec,
    )


def sample(density: Density, rng: SplitMix64) -> float:
    """One draw of the initial amount; deterministic per seed."""
    if not density.proper or density.sampler is None:
        raise ImproperDensityError(
            f"density {density.name!r} is improper or has no sampler; analytic use only"
        )
    plan = density.sampler
    uniforms = [rng.uniform() for _ in range(plan.uniforms_per_draw)]
    return plan.draw(uniforms)


def spec_of(density: Density) -> DensitySpec:
    if density.spec is None:
        raise InvalidParameterError(f"density {density.name!r} has no serializable spec")
    return density.spec


def build_density(spec: DensitySpec) -> Density:
    """Construct the density a spec describes."""
    if spec.name == "piecewise":
        if spec.kind != "continuous":
            raise InvalidParameterError("piecewise densities are continuous")
        if spec.breakpoints is None or spec.values is None:
            raise InvalidParameterError("piecewise spec needs breakpoints and values")
        if spec.params:
            raise InvalidParameterError("piecewise spec takes no params")
        return piecewise_constant(spec.breakpoints, spec.values, proper=spec.proper)
    if spec.breakpoints is not None or spec.values is not None:
        raise InvalidParameterError("breakpoints/values are only valid for piecewise")
    from .catalog import catalog_lookup

    built = catalog_lookup(spec.name, dict(spec.params))
    if built.kind != spec.kind:
        raise InvalidParameterError(
            f"density {spec.name!r} is {built.kind}, spec says {spec.kind!r}"
        )
    return built


def density_from_json(text: str) -> Density:
    return build_density(DensitySpec.from_json(text))
