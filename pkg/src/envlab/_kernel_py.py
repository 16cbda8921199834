"""Vectorized numpy simulation kernel (fallback backend).

Play i consumes uniforms at stream indices i*stride .. i*stride+stride-1:
first the draw uniforms for x1, then one for each coin.  The stream is
the indexed splitmix64 stream of envlab.rng, so results depend only on
(seed, play index) and batches can start anywhere.

This module must stay behaviorally aligned with _kernel_c.pyx: same
index layout, same transforms, same clamping.  Only last-ulp rounding
of the transcendental transforms and the summation order may differ.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_TO_UNIT = 2.0**-53
_TINY = 2.2250738585072014e-308

_SUB = 1 << 18  # fixed sub-batch size; fixed so summation order is reproducible

FAMILY_UNIFORM01 = 0
FAMILY_RAYLEIGH = 1
FAMILY_BROOME_CONT = 2
FAMILY_BROOME_DISC = 3
FAMILY_EXTREME = 4
FAMILY_PIECEWISE = 5

_DRAW_UNIFORMS = {0: 1, 1: 1, 2: 1, 3: 1, 4: 2, 5: 1}


def _uniforms(seed: np.uint64, indices: np.ndarray) -> np.ndarray:
    z = seed + (indices + np.uint64(1)) * _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * _TO_UNIT


def _draw_x1(family: int, t0, t1, t2, u0: np.ndarray, u1) -> np.ndarray:
    if family == FAMILY_UNIFORM01:
        x = 1.0 - u0
    elif family == FAMILY_RAYLEIGH:
        x = 0.5 * np.sqrt(-np.log1p(-u0))
    elif family == FAMILY_BROOME_CONT:
        x = u0 / (1.0 - u0)
    elif family == FAMILY_BROOME_DISC:
        x = t1[np.searchsorted(t0, u0, side="right")]
    elif family == FAMILY_EXTREME:
        k = np.searchsorted(t0, u0, side="right")
        x = t1[k] * (1.0 + 9.0 * u1)
    elif family == FAMILY_PIECEWISE:
        t = u0 * t0[-1]
        j = np.searchsorted(t0, t, side="right")
        prev = np.concatenate(([0.0], t0[:-1]))[j]
        x = t1[j] + (t - prev) / t2[j]
    else:
        raise ValueError(f"unknown sampler family code {family}")
    return np.where(x > 0.0, x, _TINY)


def _play_arrays(family, t0, t1, t2, fixed_w2, fixed_w3, count, seed, first_play):
    draws = _DRAW_UNIFORMS[family]
    stride = draws + 2
    base = (np.uint64(first_play) + np.arange(count, dtype=np.uint64)) * np.uint64(stride)
    u0 = _uniforms(seed, base)
    u1 = _uniforms(seed, base + np.uint64(1)) if draws == 2 else None
    u_w2 = _uniforms(seed, base + np.uint64(draws))
    u_w3 = _uniforms(seed, base + np.uint64(draws + 1))
    x1 = _draw_x1(family, t0, t1, t2, u0, u1)
    doubled = (u_w2 < 0.5) if fixed_w2 < 0 else np.full(count, bool(fixed_w2))
    second = (u_w3 < 0.5) if fixed_w3 < 0 else np.full(count, bool(fixed_w3))
    g = np.where(doubled, 2.0, 0.5)
    primed = g * x1
    y_play = np.where(second, primed, x1)
    b = np.where(second, x1 - primed, primed - x1)
    return x1, doubled, second, y_play, b


def run_batch(
    family: int,
    t0: np.ndarray,
    t1: np.ndarray,
    t2: np.ndarray,
    fixed_w2: int,
    fixed_w3: int,
    y: float,
    eps: float,
    exact: int,
    window: int,
    n: int,
    seed: int,
    start_play: int,
) -> tuple[int, float, float, float, float]:
    """Simulate n plays; return (n_cond, sum, sumsq, sum_all, sumsq_all)."""
    seed_u = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    n_cond = 0
    s = q = sa = qa = 0.0
    done = 0
    with np.errstate(over="ignore"):
        while done < n:
            count = min(_SUB, n - done)
            _, _, _, y_play, b = _play_arrays(
                family, t0, t1, t2, fixed_w2, fixed_w3, count, seed_u, start_play + done
            )
            sa += float(b.sum())
            qa += float(np.square(b).sum())
            if window:
                if exact:
                    mask = y_play == y
                else:
                    mask = (y_play > y - eps) & (y_play <= y + eps)
                picked = b[mask]
                n_cond += int(picked.size)
                s += float(picked.sum())
                q += float(np.square(picked).sum())
            done += count
    return n_cond, s, q, sa, qa


def trace_plays(
    family: int,
    t0: np.ndarray,
    t1: np.ndarray,
    t2: np.ndarray,
    fixed_w2: int,
    fixed_w3: int,
    n: int,
    seed: int,
    start_play: int = 0,
) -> dict:
    """Per-play arrays for tests and debugging (always this backend)."""
    seed_u = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    with np.errstate(over="ignore"):
        x1, doubled, second, y_play, b = _play_arrays(
            family, t0, t1, t2, fixed_w2, fixed_w3, n, seed_u, start_play
        )
    return {
        "x1": x1,
        "omega2": doubled.astype(np.int64),
        "omega3": second.astype(np.int64),
        "y": y_play,
        "b": b,
    }
