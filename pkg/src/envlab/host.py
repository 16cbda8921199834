"""The host's three experiments and the envelope algebra.

A play is built from three independent draws: the initial amount x1
from the prior, a fair coin w2 choosing whether the second envelope is
primed with half or double the amount, and a fair coin w3 choosing
which envelope is handed over.  A process may pin either coin; the
five supported processes cover every combination the game defines.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .density import Density, DiscreteDensity, sample
from .dyadic import DyadicRational
from .errors import EventProcessMismatchError, NonpositiveAmountError
from .rng import SplitMix64


class Process(Enum):
    """Content-and-allocation processes."""

    HALVE_OR_DOUBLE = "halve-or-double"
    DOUBLE_ONLY = "double-only"
    HALVE_ONLY = "halve-only"
    ALLOCATE_FIRST_THEN_PRIME = "allocate-first"
    PRIME_SECOND_THEN_ALLOCATE = "allocate-second"

    @property
    def fixed_omega2(self) -> Optional[int]:
        if self is Process.DOUBLE_ONLY:
            return 1
        if self is Process.HALVE_ONLY:
            return 0
        return None

    @property
    def fixed_omega3(self) -> Optional[int]:
        if self is Process.ALLOCATE_FIRST_THEN_PRIME:
            return 0
        if self is Process.PRIME_SECOND_THEN_ALLOCATE:
            return 1
        return None

    @property
    def coin_probability(self) -> Fraction:
        """Probability contributed by the free coin(s): 1/4 or 1/2."""
        free = (self.fixed_omega2 is None) + (self.fixed_omega3 is None)
        return Fraction(1, 2**free)

    @classmethod
    def parse(cls, text: str) -> "Process":
        key = text.strip().lower().replace("_", "-")
        aliases = {
            "halve-or-double": cls.HALVE_OR_DOUBLE,
            "double-only": cls.DOUBLE_ONLY,
            "halve-only": cls.HALVE_ONLY,
            "allocate-first": cls.ALLOCATE_FIRST_THEN_PRIME,
            "allocate-first-then-prime": cls.ALLOCATE_FIRST_THEN_PRIME,
            "allocate-second": cls.PRIME_SECOND_THEN_ALLOCATE,
            "prime-second-then-allocate": cls.PRIME_SECOND_THEN_ALLOCATE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown process {text!r}") from None


ALL_PROCESSES = tuple(Process)


@dataclass(frozen=True)
class HostEvent:
    """One realized outcome {x1; w2; w3}."""

    x1: float
    omega2: int
    omega3: int

    def __post_init__(self) -> None:
        if not self.x1 > 0:
            raise NonpositiveAmountError(f"initial amount must be positive, got {self.x1!r}")
        if self.omega2 not in (0, 1) or self.omega3 not in (0, 1):
            raise ValueError("omega values must be 0 or 1")


@dataclass(frozen=True)
class Play:
    """A host event plus the contents it produced."""

    event: HostEvent
    y: float
    z: float
    b: float


def g_factor(omega2: int) -> float:
    """Priming factor for the second envelope: 1/2 on 0, 2 on 1."""
    if omega2 == 0:
        return 0.5
    if omega2 == 1:
        return 2.0
    raise ValueError("omega2 must be 0 or 1")


def allocate(x1: float, omega2: int, omega3: int) -> Play:
    """Prime the second envelope and hand one over.

    w3 = 0 allocates the first envelope (the agent observes x1);
    w3 = 1 allocates the primed second envelope.
    """
    event = HostEvent(float(x1), omega2, omega3)
    primed = g_factor(omega2) * event.x1
    if omega3 == 0:
        y, z = event.x1, primed
    else:
        y, z = primed, event.x1
    return Play(event=event, y=y, z=z, b=z - y)


def event_probability(
    density: DiscreteDensity, event: HostEvent, process: Process
) -> Union[Fraction, float]:
    """P of one discrete event under the process: coin factor times mass."""
    fixed2 = process.fixed_omega2
    if fixed2 is not None and event.omega2 != fixed2:
        raise EventProcessMismatchError(
            f"{process.value} fixes omega2={fixed2}, event has {event.omega2}"
        )
    fixed3 = process.fixed_omega3
    if fixed3 is not None and event.omega3 != fixed3:
        raise EventProcessMismatchError(
            f"{process.value} fixes omega3={fixed3}, event has {event.omega3}"
        )
    mass = density.mass(DyadicRational.from_float(event.x1))
    return process.coin_probability * mass


def candidate_initials(y: float, process: Process) -> set[float]:
    """Initial amounts that can produce the observation y."""
    y = float(y)
    if not y > 0:
        raise NonpositiveAmountError(f"observation must be positive, got {y!r}")
    if process is Process.DOUBLE_ONLY:
        return {y / 2, y}
    if process is Process.HALVE_ONLY:
        return {y, 2 * y}
    if process is Process.HALVE_OR_DOUBLE:
        return {y / 2, y, 2 * y}
    if process is Process.ALLOCATE_FIRST_THEN_PRIME:
        return {y}
    return {y / 2, 2 * y}


def run_play(density: Density, process: Process, rng: SplitMix64) -> Play:
    """One seeded play.

    Both coin uniforms are always consumed, even when the process pins
    a coin, so the x1 stream stays aligned across processes for a
    given seed and the batch kernels reproduce the same plays.
    """
    x1 = sample(density, rng)
    u2 = rng.uniform()
    u3 = rng.uniform()
    fixed2 = process.fixed_omega2
    fixed3 = process.fixed_omega3
    omega2 = fixed2 if fixed2 is not None else (1 if u2 < 0.5 else 0)
    omega3 = fixed3 if fixed3 is not None else (1 if u3 < 0.5 else 0)
    return allocate(x1, omega2, omega3)
