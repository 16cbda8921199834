"""Benefit-table rendering shared by the CLI and the HTTP service."""

from __future__ import annotations

import csv
import io
import math
from typing import Sequence

from .benefit import expected_benefit
from .density import Density
from .errors import InvalidIntervalError
from .host import Process

CSV_COLUMNS = ("density", "process", "y", "numerator", "denominator",
               "expected_benefit", "decision", "attainable")


def make_grid(start: float, stop: float, count: int, scale: str = "linear") -> list[float]:
    """count observation points from start to stop, inclusive."""
    if not isinstance(count, int) or count < 1:
        raise InvalidIntervalError(f"grid count must be a positive integer, got {count!r}")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise InvalidIntervalError("grid endpoints must be finite")
    if not 0 < start <= stop:
        raise InvalidIntervalError(f"need 0 < start <= stop, got ({start}, {stop})")
    if scale not in ("linear", "log"):
        raise InvalidIntervalError(f"scale must be 'linear' or 'log', got {scale!r}")
    if count == 1:
        return [start]
    if scale == "linear":
        step = (stop - start) / (count - 1)
        return [start + step * i for i in range(count)]
    ratio = math.log(stop / start)
    return [start * math.exp(ratio * i / (count - 1)) for i in range(count)]


def _fmt(value: float) -> str:
    return repr(float(value))


def table_rows(density: Density, process: Process, ys: Sequence[float]) -> list[list[str]]:
    rows = []
    for y in ys:
        report = expected_benefit(density, process, y)
        rows.append(
            [
                density.name,
                process.value,
                _fmt(report.y),
                _fmt(report.numerator),
                _fmt(report.denominator),
                _fmt(report.expected_benefit),
                report.decision.value,
                "true" if report.attainable else "false",
            ]
        )
    return rows


def render_csv(density: Density, process: Process, ys: Sequence[float]) -> str:
    """CSV with the fixed header; float cells use repr round-tripping."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(table_rows(density, process, ys))
    return buf.getvalue()
