"""Analytic conditional expected benefit of switching.

Conditioning on the observed amount y restricts the host's sample
space to the events that can produce y.  The expected benefit of
switching is then a ratio of finite weighted sums over those events;
the weights are prior masses (discrete) or density values times the
window-size factors the play dynamics induce (continuous).  The
numerator of that ratio is the exchange condition e(y): its sign is
the switching decision and its roots are the indifference points.

Per process, with P the mass function and f the pdf:

  double-only      (-(y/2) P(y/2) + y P(y))               / (P(y/2) + P(y))
                   (-(y/2) f(y/2) + 2y f(y))              / (f(y/2) + 2 f(y))
  halve-only       (-(y/2) P(y)   + y P(2y))              / (P(y) + P(2y))
                   (-y f(y)       + 4y f(2y))             / (2 f(y) + 4 f(2y))
  halve-or-double  (-(y/2) P(y/2) + (y/2) P(y) + y P(2y)) / (P(y/2) + 2 P(y) + P(2y))
                   (-(y/2) f(y/2) + y f(y) + 4y f(2y))    / (f(y/2) + 4 f(y) + 4 f(2y))
  allocate-first   y/4 for any prior (a simple lottery on the priming coin)
  allocate-second  (-(y/2) P(y/2) + y P(2y))              / (P(y/2) + P(2y))
                   (-(y/2) f(y/2) + 4y f(2y))             / (f(y/2) + 4 f(2y))

Discrete masses that are exact rationals are combined exactly and only
rounded once at the end.  Normalization constants cancel in the ratio,
so improper priors are fully supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from .density import ContinuousDensity, Density, DiscreteDensity
from .dyadic import DyadicRational
from .errors import InvalidIntervalError, NonpositiveAmountError, OutOfBoundsError
from .host import Process

INDIFFERENCE_TOL = 1e-12


class Decision(Enum):
    SWITCH = "switch"
    STAY = "stay"
    INDIFFERENT = "indifferent"


@dataclass(frozen=True)
class Bounds:
    """Caller-supplied bounds on observable envelope contents."""

    x_l: Optional[float] = None
    x_u: Optional[float] = None

    def __post_init__(self) -> None:
        if self.x_l is not None and self.x_l < 0:
            raise ValueError("lower bound must be nonnegative")
        if self.x_u is not None and self.x_u <= 0:
            raise ValueError("upper bound must be positive")
        if self.x_l is not None and self.x_u is not None and not self.x_l < self.x_u:
            raise ValueError("bounds require x_l < x_u")


@dataclass(frozen=True)
class BenefitReport:
    """E(B | Y = y) together with its ratio decomposition."""

    y: float
    numerator: float
    denominator: float
    expected_benefit: float
    decision: Decision
    attainable: bool

    def to_dict(self) -> dict:
        return {
            "y": self.y,
            "numerator": self.numerator,
            "denominator": self.denominator,
            "expected_benefit": self.expected_benefit if self.attainable else None,
            "decision": self.decision.value,
            "attainable": self.attainable,
        }


def decide(expected: float) -> Decision:
    if expected > INDIFFERENCE_TOL:
        return Decision.SWITCH
    if expected < -INDIFFERENCE_TOL:
        return Decision.STAY
    return Decision.INDIFFERENT


def make_report(y: float, numerator, denominator) -> BenefitReport:
    """Assemble a report from a weighted-sum ratio.

    A zero denominator means no event can produce y: the observation
    is flagged unattainable instead of raising, so grid sweeps survive
    support gaps.
    """
    if denominator > 0:
        expected = float(numerator / denominator)
        return BenefitReport(
            y=float(y),
            numerator=float(numerator),
            denominator=float(denominator),
            expected_benefit=expected,
            decision=decide(expected),
            attainable=True,
        )
    return BenefitReport(
        y=float(y),
        numerator=float(numerator),
        denominator=float(denominator),
        expected_benefit=math.nan,
        decision=Decision.INDIFFERENT,
        attainable=False,
    )


def _discrete_numden(density: DiscreteDensity, process: Process, y: DyadicRational):
    yf = y.as_fraction()
    p_half = density.mass(y.halve())
    p_same = density.mass(y)
    p_double = density.mass(y.double())
    if process is Process.DOUBLE_ONLY:
        return -(yf / 2) * p_half + yf * p_same, p_half + p_same
    if process is Process.HALVE_ONLY:
        return -(yf / 2) * p_same + yf * p_double, p_same + p_double
    if process is Process.HALVE_OR_DOUBLE:
        num = -(yf / 2) * p_half + (yf / 2) * p_same + yf * p_double
        return num, p_half + 2 * p_same + p_double
    if process is Process.ALLOCATE_FIRST_THEN_PRIME:
        return yf / 4, Fraction(1)
    num = -(yf / 2) * p_half + yf * p_double
    return num, p_half + p_double


def _continuous_numden(density: ContinuousDensity, process: Process, y: float):
    f_half = density.pdf(y / 2)
    f_same = density.pdf(y)
    f_double = density.pdf(2 * y)
    if process is Process.DOUBLE_ONLY:
        return -(y / 2) * f_half + 2 * y * f_same, f_half + 2 * f_same
    if process is Process.HALVE_ONLY:
        return -y * f_same + 4 * y * f_double, 2 * f_same + 4 * f_double
    if process is Process.HALVE_OR_DOUBLE:
        num = -(y / 2) * f_half + y * f_same + 4 * y * f_double
        return num, f_half + 4 * f_same + 4 * f_double
    if process is Process.ALLOCATE_FIRST_THEN_PRIME:
        return y / 4, 1.0
    return -(y / 2) * f_half + 4 * y * f_double, f_half + 4 * f_double


def expected_benefit_discrete(
    density: DiscreteDensity, process: Process, y: Union[int, float, DyadicRational]
) -> BenefitReport:
    yd = DyadicRational.coerce(y)
    if not yd.is_positive:
        raise NonpositiveAmountError(f"observation must be positive, got {y!r}")
    numerator, denominator = _discrete_numden(density, process, yd)
    return make_report(float(yd), numerator, denominator)


def expected_benefit_continuous(
    density: ContinuousDensity, process: Process, y: float
) -> BenefitReport:
    y = float(y)
    if not y > 0:
        raise NonpositiveAmountError(f"observation must be positive, got {y!r}")
    numerator, denominator = _continuous_numden(density, process, y)
    return make_report(y, numerator, denominator)


def expected_benefit(density: Density, process: Process, y) -> BenefitReport:
    """Kind dispatch for expected_benefit_discrete/continuous."""
    if density.kind == "discrete":
        return expected_benefit_discrete(density, process, y)
    return expected_benefit_continuous(density, process, float(y))


def exchange_condition(density: Density, process: Process, y: float) -> float:
    """e(y): the numerator of the matching expected-benefit formula."""
    if density.kind == "discrete":
        yd = DyadicRational.coerce(y)
        if not yd.is_positive:
            raise NonpositiveAmountError(f"observation must be positive, got {y!r}")
        numerator, _ = _discrete_numden(density, process, yd)
    else:
        y = float(y)
        if not y > 0:
            raise NonpositiveAmountError(f"observation must be positive, got {y!r}")
        numerator, _ = _continuous_numden(density, process, y)
    return float(numerator)


def find_exchange_roots(
    density: Density,
    process: Process,
    interval: Sequence[float],
    tol: float = 1e-9,
    cells: int = 4096,
) -> list[float]:
    """Sign-change roots of e(y) on (lo, hi).

    A uniform scan over `cells` cells brackets each sign change, then
    bisection narrows the bracket to width <= tol; the cell count
    bounds how close two roots may be and still be separated.
    """
    try:
        lo, hi = float(interval[0]), float(interval[1])
    except (TypeError, ValueError, IndexError) as exc:
        raise InvalidIntervalError(f"interval must be (lo, hi), got {interval!r}") from exc
    if not (0 < lo < hi) or not math.isfinite(lo) or not math.isfinite(hi):
        raise InvalidIntervalError(f"need 0 < lo < hi finite, got ({lo}, {hi})")
    if not tol > 0:
        raise InvalidIntervalError(f"tol must be positive, got {tol}")
    if not isinstance(cells, int) or cells < 1:
        raise InvalidIntervalError(f"cells must be a positive integer, got {cells!r}")

    def e(t: float) -> float:
        return exchange_condition(density, process, t)

    xs = [lo + (hi - lo) * i / cells for i in range(cells + 1)]
    vals = [e(x) for x in xs]
    roots: list[float] = []
    for x, v in zip(xs, vals):
        if v == 0.0:
            roots.append(x)
    for i in range(cells):
        va, vb = vals[i], vals[i + 1]
        if math.isnan(va) or math.isnan(vb) or not va * vb < 0:
            continue
        a, b, fa = xs[i], xs[i + 1], va
        while b - a > tol:
            mid = 0.5 * (a + b)
            fm = e(mid)
            if fm == 0.0:
                a = b = mid
                break
            if (fa < 0) != (fm < 0):
                b = mid
            else:
                a, fa = mid, fm
        roots.append(0.5 * (a + b))
    roots.sort()
    deduped: list[float] = []
    for r in roots:
        if not deduped or r - deduped[-1] > tol:
            deduped.append(r)
    return deduped


def strategy(
    density: Density,
    process: Process,
    bounds: Optional[Bounds],
    y: float,
) -> tuple[Decision, float]:
    """Switching rule with optional content bounds.

    Below twice the lower bound the other envelope can only hold more,
    so the answer is (Switch, y); above half the upper bound it can
    only hold less, so (Stay, -y/2).  In between, and exactly at the
    two boundary points, the expected-benefit formula decides.
    """
    y = float(y)
    if not y > 0:
        raise NonpositiveAmountError(f"observation must be positive, got {y!r}")
    if bounds is not None:
        if bounds.x_l is not None and y < bounds.x_l:
            raise OutOfBoundsError(f"y={y} below lower content bound {bounds.x_l}")
        if bounds.x_u is not None and y > bounds.x_u:
            raise OutOfBoundsError(f"y={y} above upper content bound {bounds.x_u}")
        if bounds.x_l is not None and y < 2 * bounds.x_l:
            return (Decision.SWITCH, y)
        if bounds.x_u is not None and y > bounds.x_u / 2:
            return (Decision.STAY, -y / 2)
    report = expected_benefit(density, process, y)
    return (report.decision, report.expected_benefit)
