"""Simulation backend selection.

The compiled kernel (envlab._kernel_c, built from Cython) is used when
importable; otherwise the vectorized numpy fallback takes over.  Both
consume the identical indexed uniform stream, so a given seed yields
the same plays up to last-ulp rounding of transcendental transforms.
Set ENVLAB_BACKEND=py or ENVLAB_BACKEND=c to force a backend.
"""

from __future__ import annotations

import os
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _kernel_py
from .density import Density, SamplerPlan
from .errors import ImproperDensityError, InvalidParameterError
from .host import Process

try:
    from . import _kernel_c
except ImportError:  # pragma: no cover - depends on how the package was built
    _kernel_c = None

_FAMILY_CODES = {
    "uniform01": _kernel_py.FAMILY_UNIFORM01,
    "rayleigh_half": _kernel_py.FAMILY_RAYLEIGH,
    "broome_continuous": _kernel_py.FAMILY_BROOME_CONT,
    "broome_discrete": _kernel_py.FAMILY_BROOME_DISC,
    "extreme_values": _kernel_py.FAMILY_EXTREME,
    "piecewise": _kernel_py.FAMILY_PIECEWISE,
}

_EMPTY = np.empty(0, dtype=np.float64)


def available_backends() -> tuple[str, ...]:
    return ("c", "py") if _kernel_c is not None else ("py",)


def active_backend() -> str:
    forced = os.environ.get("ENVLAB_BACKEND")
    if forced:
        if forced not in ("c", "py"):
            raise ValueError(f"ENVLAB_BACKEND must be 'c' or 'py', got {forced!r}")
        if forced == "c" and _kernel_c is None:
            raise RuntimeError("ENVLAB_BACKEND=c but the compiled kernel is not built")
        return forced
    return "c" if _kernel_c is not None else "py"


@lru_cache(maxsize=64)
def _tables(plan_tables: tuple) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    arrays = [np.ascontiguousarray(t, dtype=np.float64) for t in plan_tables]
    while len(arrays) < 3:
        arrays.append(_EMPTY)
    return arrays[0], arrays[1], arrays[2]


def _plan_of(density: Density) -> SamplerPlan:
    if not density.proper or density.sampler is None:
        raise ImproperDensityError(
            f"density {density.name!r} is improper or has no sampler; analytic use only"
        )
    return density.sampler


def run_batch(
    density: Density,
    process: Process,
    *,
    n: int,
    seed: int,
    start_play: int = 0,
    y: float = 0.0,
    eps: float = 0.0,
    exact: bool = False,
    window: bool = False,
    backend: Optional[str] = None,
) -> tuple[int, float, float, float, float]:
    """Simulate n plays starting at a stream offset.

    Returns (n_conditioned, sum_b, sumsq_b, sum_b_all, sumsq_b_all)
    where the first three cover plays inside the conditioning window
    (if window is set) and the last two cover every play.  Results are
    a pure function of (density, process, seed, start_play, n), which
    is what makes sharded runs mergeable.
    """
    plan = _plan_of(density)
    family = _FAMILY_CODES[plan.family]
    t0, t1, t2 = _tables(plan.tables)
    fixed_w2 = process.fixed_omega2 if process.fixed_omega2 is not None else -1
    fixed_w3 = process.fixed_omega3 if process.fixed_omega3 is not None else -1
    chosen = backend or active_backend()
    if chosen not in ("c", "py"):
        raise InvalidParameterError(f"backend must be 'c' or 'py', got {chosen!r}")
    if chosen == "c" and _kernel_c is None:
        raise RuntimeError("compiled kernel requested but not built")
    impl = _kernel_py if chosen == "py" else _kernel_c
    return impl.run_batch(
        family,
        t0,
        t1,
        t2,
        fixed_w2,
        fixed_w3,
        float(y),
        float(eps),
        int(bool(exact)),
        int(bool(window)),
        int(n),
        int(seed) & 0xFFFFFFFFFFFFFFFF,
        int(start_play),
    )


def trace_plays(density: Density, process: Process, n: int, seed: int, start_play: int = 0) -> dict:
    """Per-play arrays (numpy path), for tests and inspection."""
    plan = _plan_of(density)
    family = _FAMILY_CODES[plan.family]
    t0, t1, t2 = _tables(plan.tables)
    fixed_w2 = process.fixed_omega2 if process.fixed_omega2 is not None else -1
    fixed_w3 = process.fixed_omega3 if process.fixed_omega3 is not None else -1
    return _kernel_py.trace_plays(
        family, t0, t1, t2, fixed_w2, fixed_w3, int(n), int(seed) & 0xFFFFFFFFFFFFFFFF, int(start_play)
    )
