"""envlab: a two-envelope game engine.

Analytic conditional expected benefits of switching for five
content-and-allocation processes over a catalog of prior densities,
exchange-condition root finding, bounded switching strategies, an
exact-enumeration plus Monte-Carlo verification oracle, and an
interactive play server.
"""

from .benefit import (
    INDIFFERENCE_TOL,
    BenefitReport,
    Bounds,
    Decision,
    exchange_condition,
    expected_benefit,
    expected_benefit_continuous,
    expected_benefit_discrete,
    find_exchange_roots,
    strategy,
)
from .catalog import CATALOG_NAMES, catalog_entries, catalog_lookup
from .density import (
    ContinuousDensity,
    Density,
    DensitySpec,
    DiscreteDensity,
    SamplerPlan,
    build_density,
    density_from_json,
    piecewise_constant,
    sample,
    spec_of,
)
from .dyadic import DyadicRational
from .errors import (
    EnvelopeError,
    EventProcessMismatchError,
    ImproperDensityError,
    InvalidIntervalError,
    InvalidParameterError,
    NoConditionedSamplesError,
    NonpositiveAmountError,
    OutOfBoundsError,
    UnknownDensityError,
)
from .host import (
    ALL_PROCESSES,
    HostEvent,
    Play,
    Process,
    allocate,
    candidate_initials,
    event_probability,
    g_factor,
    run_play,
)
from .oracle import (
    ComparisonReport,
    McEstimate,
    PlayStats,
    compare,
    enumerate_conditional_benefit,
    mc_conditional_benefit,
    play_statistics,
)
from .rng import SplitMix64

__version__ = "0.1.0"

__all__ = [
    "ALL_PROCESSES",
    "BenefitReport",
    "Bounds",
    "CATALOG_NAMES",
    "ComparisonReport",
    "ContinuousDensity",
    "Decision",
    "Density",
    "DensitySpec",
    "DiscreteDensity",
    "DyadicRational",
    "EnvelopeError",
    "EventProcessMismatchError",
    "HostEvent",
    "INDIFFERENCE_TOL",
    "ImproperDensityError",
    "InvalidIntervalError",
    "InvalidParameterError",
    "McEstimate",
    "NoConditionedSamplesError",
    "NonpositiveAmountError",
    "OutOfBoundsError",
    "Play",
    "PlayStats",
    "Process",
    "SamplerPlan",
    "SplitMix64",
    "UnknownDensityError",
    "allocate",
    "build_density",
    "candidate_initials",
    "catalog_entries",
    "catalog_lookup",
    "compare",
    "density_from_json",
    "enumerate_conditional_benefit",
    "event_probability",
    "exchange_condition",
    "expected_benefit",
    "expected_benefit_continuous",
    "expected_benefit_discrete",
    "find_exchange_roots",
    "g_factor",
    "mc_conditional_benefit",
    "piecewise_constant",
    "play_statistics",
    "run_play",
    "sample",
    "spec_of",
    "strategy",
    "__version__",
]
