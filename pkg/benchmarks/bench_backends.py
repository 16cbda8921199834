"""Throughput comparison of the play-simulation backends.

Runs identical conditioned batches through the compiled kernel and
the numpy fallback and reports plays per second.

    python3 benchmarks/bench_backends.py [--n 8000000] [--repeats 3]
"""

import argparse
import time

from envlab.catalog import catalog_lookup
from envlab.host import Process
from envlab.kernels import available_backends, run_batch


def bench(density, process, backend: str, n: int, y: float, repeats: int) -> float:
    run_batch(density, process, n=10_000, seed=0, y=y, eps=y / 128,
              window=True, backend=backend)   # warm up tables
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        run_batch(density, process, n=n, seed=7, y=y, eps=y / 128,
                  window=True, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return n / best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=8_000_000, help="plays per timing run")
    parser.add_argument("--repeats", type=int, default=3, help="timing repeats, best kept")
    args = parser.parse_args()

    backends = available_backends()
    cases = [
        ("uniform01", {}, Process.HALVE_OR_DOUBLE, 0.4),
        ("rayleigh_half", {}, Process.DOUBLE_ONLY, 0.6),
        ("broome_discrete", {}, Process.HALVE_ONLY, 2.0),
        ("broome_continuous", {}, Process.PRIME_SECOND_THEN_ALLOCATE, 1.0),
        ("extreme_values", {}, Process.HALVE_OR_DOUBLE, 30.0),
    ]
    print(f"backends: {', '.join(backends)}   plays per run: {args.n:,}")
    header = f"{'density':<20}{'process':<18}" + "".join(f"{b + ' plays/s':>16}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for name, params, process, y in cases:
        density = catalog_lookup(name, params)
        rates = [bench(density, process, b, args.n, y, args.repeats) for b in backends]
        row = f"{name:<20}{process.value:<18}" + "".join(f"{r:>16,.0f}" for r in rates)
        if len(rates) == 2:
            row += f"{rates[0] / rates[1]:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
