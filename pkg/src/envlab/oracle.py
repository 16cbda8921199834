"""Independent verification of the analytic formulas.

Two oracles, deliberately built from different ingredients than the
closed forms in envlab.benefit:

* exact enumeration (discrete priors): the events able to produce the
  observation are listed literally, each with its benefit from the
  envelope algebra and its probability from the host's product rule,
  and the conditional expectation is their weighted mean;
* seeded Monte-Carlo (proper priors): plays are simulated in bulk and
  conditioned on an additive window around y (exact equality for
  discrete supports), giving a mean benefit with a standard error.

An analytic report and an estimate are then compared within
k_sigma standard errors plus a window-bias allowance of
BIAS_ALLOWANCE_C * epsilon (the window bias is first order in the
window half-width).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import kernels
from .benefit import BenefitReport, make_report
from .density import Density, DiscreteDensity
from .dyadic import DyadicRational
from .errors import InvalidParameterError, NoConditionedSamplesError, NonpositiveAmountError
from .host import HostEvent, Process, allocate, event_probability

BIAS_ALLOWANCE_C = 2.0
TARGET_CONDITIONED = 10_000
PLAY_CAP = 100_000_000
DEFAULT_EPS_DIVISOR = 128
_CHUNK = 1 << 20


@dataclass(frozen=True)
class McEstimate:
    """Monte-Carlo estimate of E(B | Y near y).

    epsilon is the window half-width; 0.0 records that conditioning
    was an exact match on a discrete support.
    """

    y_center: float
    epsilon: float
    n_total: int
    n_conditioned: int
    mean_benefit: float
    std_error: float

    def to_dict(self) -> dict:
        return {
            "y_center": self.y_center,
            "epsilon": self.epsilon,
            "n_total": self.n_total,
            "n_conditioned": self.n_conditioned,
            "mean_benefit": self.mean_benefit,
            "std_error": self.std_error,
        }


@dataclass(frozen=True)
class PlayStats:
    """Unconditioned statistics over a batch of plays."""

    n: int
    mean_benefit: float
    std_error: float
    total_benefit: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mean_benefit": self.mean_benefit,
            "std_error": self.std_error,
            "total_benefit": self.total_benefit,
        }


@dataclass(frozen=True)
class ComparisonReport:
    passed: bool
    analytic: float
    mean_benefit: float
    delta: float
    band: float
    k_sigma: float
    bias_allowance: float

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "analytic": self.analytic,
            "mean_benefit": self.mean_benefit,
            "delta": self.delta,
            "band": self.band,
            "k_sigma": self.k_sigma,
            "bias_allowance": self.bias_allowance,
        }


def _events_for(process: Process, y: DyadicRational) -> list[tuple[DyadicRational, int, int]]:
    half, same, double = y.halve(), y, y.double()
    doubling = [(half, 1, 1), (same, 1, 0)]
    halving = [(same, 0, 0), (double, 0, 1)]
    if process is Process.DOUBLE_ONLY:
        return doubling
    if process is Process.HALVE_ONLY:
        return halving
    if process is Process.HALVE_OR_DOUBLE:
        return doubling + halving
    if process is Process.ALLOCATE_FIRST_THEN_PRIME:
        return [(same, 0, 0), (same, 1, 0)]
    return [(half, 1, 1), (double, 0, 1)]


def enumerate_conditional_benefit(
    density: DiscreteDensity, process: Process, y: Union[int, float, DyadicRational]
) -> BenefitReport:
    """Conditional expectation by literal event enumeration.

    Each candidate event contributes the benefit computed by the
    envelope algebra, weighted by the host's event probability; no
    closed-form expression is consulted.
    """
    yd = DyadicRational.coerce(y)
    if not yd.is_positive:
        raise NonpositiveAmountError(f"observation must be positive, got {y!r}")
    numerator: Union[Fraction, float] = Fraction(0)
    denominator: Union[Fraction, float] = Fraction(0)
    for point, omega2, omega3 in _events_for(process, yd):
        event = HostEvent(float(point), omega2, omega3)
        weight = event_probability(density, event, process)
        play = allocate(event.x1, omega2, omega3)
        numerator = numerator + Fraction(play.b) * weight
        denominator = denominator + weight
    return make_report(float(yd), numerator, denominator)


def mc_conditional_benefit(
    density: Density,
    process: Process,
    y: float,
    epsilon: Optional[float] = None,
    n: Optional[int] = None,
    seed: int = 0,
) -> McEstimate:
    """Seeded Monte-Carlo estimate of the conditional benefit.

    Continuous priors condition on y - eps < play.y <= y + eps with
    eps defaulting to y/128; discrete priors condition on exact
    equality.  With n omitted, plays are added in chunks until at
    least TARGET_CONDITIONED samples land in the window or PLAY_CAP
    plays have run.  Identical (seed, n) give identical estimates.
    """
    y = float(y)
    if not y > 0:
        raise NonpositiveAmountError(f"observation must be positive, got {y!r}")
    exact = density.kind == "discrete"
    if exact:
        eps = 0.0
    else:
        eps = y / DEFAULT_EPS_DIVISOR if epsilon is None else float(epsilon)
        if not eps > 0:
            raise InvalidParameterError(f"epsilon must be positive, got {epsilon!r}")
    if n is not None and n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n!r}")

    n_cond = 0
    s = q = 0.0
    done = 0
    while True:
        if n is None:
            if n_cond >= TARGET_CONDITIONED or done >= PLAY_CAP:
                break
            count = min(_CHUNK, PLAY_CAP - done)
        else:
            count = min(_CHUNK, n - done)
            if count == 0:
                break
        got_cond, got_s, got_q, _, _ = kernels.run_batch(
            density,
            process,
            n=count,
            seed=seed,
            start_play=done,
            y=y,
            eps=eps,
            exact=exact,
            window=True,
        )
        n_cond += got_cond
        s += got_s
        q += got_q
        done += count
    if n_cond == 0:
        raise NoConditionedSamplesError(
            f"no play landed in the window around y={y} after {done} plays"
        )
    mean = s / n_cond
    if n_cond > 1:
        var = max(q - n_cond * mean * mean, 0.0) / (n_cond - 1)
    else:
        var = 0.0
    return McEstimate(
        y_center=y,
        epsilon=eps,
        n_total=done,
        n_conditioned=n_cond,
        mean_benefit=mean,
        std_error=math.sqrt(var / n_cond),
    )


def play_statistics(density: Density, process: Process, n: int, seed: int = 0) -> PlayStats:
    """Mean benefit over n seeded plays with no conditioning."""
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n!r}")
    s = q = 0.0
    done = 0
    while done < n:
        count = min(_CHUNK, n - done)
        _, _, _, got_s, got_q = kernels.run_batch(
            density, process, n=count, seed=seed, start_play=done
        )
        s += got_s
        q += got_q
        done += count
    mean = s / n
    var = max(q - n * mean * mean, 0.0) / (n - 1) if n > 1 else 0.0
    return PlayStats(n=n, mean_benefit=mean, std_error=math.sqrt(var / n), total_benefit=s)


def compare(analytic: BenefitReport, estimate: McEstimate, k_sigma: float = 4.0) -> ComparisonReport:
    """Check an analytic value against an estimate within k sigma."""
    if not analytic.attainable:
        raise ValueError("analytic report is unattainable; nothing to compare")
    if estimate.n_conditioned <= 0:
        raise ValueError("estimate has no conditioned samples")
    allowance = BIAS_ALLOWANCE_C * estimate.epsilon
    delta = abs(analytic.expected_benefit - estimate.mean_benefit)
    band = k_sigma * estimate.std_error + allowance
    return ComparisonReport(
        passed=delta <= band,
        analytic=analytic.expected_benefit,
        mean_benefit=estimate.mean_benefit,
        delta=delta,
        band=band,
        k_sigma=k_sigma,
        bias_allowance=allowance,
    )
