"""Command-line front door.

Subcommands: eval, table, roots, verify, catalog, simulate, serve.
Structured output is line-delimited JSON for streams and CSV for
tables; ENVLAB_SEED sets the default seed.  `main` returns the exit
code instead of raising SystemExit so tests can call it directly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .benefit import (
    Bounds,
    expected_benefit,
    exchange_condition,
    find_exchange_roots,
    strategy,
)
from .catalog import CATALOG_NAMES, catalog_entries, catalog_lookup
from .density import Density, DensitySpec, DiscreteDensity, build_density
from .dyadic import DyadicRational
from .errors import EnvelopeError
from .host import ALL_PROCESSES, Process
from .kernels import active_backend
from .oracle import (
    compare,
    enumerate_conditional_benefit,
    mc_conditional_benefit,
    play_statistics,
)
from .rng import SplitMix64
from .tables import make_grid, render_csv


def _parse_param(text: str):
    """k=v pair; v becomes int when possible, then float, else str."""
    if "=" not in text:
        raise ValueError(f"--param expects key=value, got {text!r}")
    key, raw = text.split("=", 1)
    for cast in (int, float):
        try:
            return key, cast(raw)
        except ValueError:
            continue
    return key, raw


def resolve_density(text: str, params: Optional[dict] = None) -> Density:
    """Catalog name, inline JSON spec, or path to a spec file."""
    params = params or {}
    stripped = text.strip()
    if stripped.startswith("{"):
        if params:
            raise ValueError("--param applies to catalog names, not inline specs")
        return build_density(DensitySpec.from_json(stripped))
    path = Path(text)
    if path.is_file():
        if params:
            raise ValueError("--param applies to catalog names, not spec files")
        return build_density(DensitySpec.from_json(path.read_text(encoding="utf-8")))
    return catalog_lookup(stripped, params)


def _default_seed(value: Optional[int]) -> int:
    if value is not None:
        return value
    env = os.environ.get("ENVLAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"ENVLAB_SEED must be an integer, got {env!r}") from exc
    return 0


def _add_density_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--density", required=True,
                     help="catalog name, inline JSON spec, or spec file path")
    sub.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                     help="catalog density parameter (repeatable)")
    sub.add_argument("--process", required=True,
                     help="halve-or-double | double-only | halve-only | "
                          "allocate-first | allocate-second")


def _density_of(args) -> Density:
    return resolve_density(args.density, dict(_parse_param(p) for p in args.param))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="envlab",
        description="Two-envelope benefit calculator, verifier, and game service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="expected benefit at one observation")
    _add_density_args(p_eval)
    p_eval.add_argument("--y", required=True, type=float, help="observed amount")
    p_eval.add_argument("--x-l", type=float, default=None, help="content lower bound")
    p_eval.add_argument("--x-u", type=float, default=None, help="content upper bound")
    p_eval.add_argument("--json", action="store_true", help="emit one JSON object")

    p_table = sub.add_parser("table", help="CSV sweep of the benefit over a y grid")
    _add_density_args(p_table)
    p_table.add_argument("--start", required=True, type=float)
    p_table.add_argument("--stop", required=True, type=float)
    p_table.add_argument("--count", required=True, type=int)
    p_table.add_argument("--scale", choices=("linear", "log"), default="linear")
    p_table.add_argument("--out", default=None, help="write CSV here instead of stdout")

    p_roots = sub.add_parser("roots", help="zeros of the exchange condition")
    _add_density_args(p_roots)
    p_roots.add_argument("--lo", required=True, type=float)
    p_roots.add_argument("--hi", required=True, type=float)
    p_roots.add_argument("--tol", type=float, default=1e-9)
    p_roots.add_argument("--cells", type=int, default=4096)
    p_roots.add_argument("--json", action="store_true", help="one JSON object per root")

    p_verify = sub.add_parser("verify", help="oracle cross-checks of the closed forms")
    p_verify.add_argument("--suite", choices=("discrete", "mc", "all"), default="all")
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--trials", type=int, default=20,
                          help="random densities per process (discrete suite)")
    p_verify.add_argument("--plays", type=int, default=400_000,
                          help="plays per Monte-Carlo check")

    p_catalog = sub.add_parser("catalog", help="list built-in densities")
    p_catalog.add_argument("--json", action="store_true", help="one JSON object per line")

    p_sim = sub.add_parser("simulate", help="seeded play batches, conditioned or not")
    _add_density_args(p_sim)
    p_sim.add_argument("--n", type=int, default=None, help="number of plays")
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--y", type=float, default=None,
                       help="condition on observing y (Monte-Carlo estimate)")
    p_sim.add_argument("--eps", type=float, default=None,
                       help="window half-width around y (continuous only)")

    p_serve = sub.add_parser("serve", help="run the HTTP JSON service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--log", default=None, help="append-only JSONL decision log")
    p_serve.add_argument("--ui", default=None, help="static console bundle to mount at /")
    p_serve.add_argument("--verbose", action="store_true", help="log requests to stderr")

    return parser


# -- subcommand bodies ------------------------------------------------------

def cmd_eval(args) -> int:
    density = _density_of(args)
    process = Process.parse(args.process)
    report = expected_benefit(density, process, args.y)

    strategy_out = None
    if args.x_l is not None or args.x_u is not None:
        bounds = Bounds(args.x_l, args.x_u)
        decision, value = strategy(density, process, bounds, args.y)
        strategy_out = {"decision": decision.value, "value": value}

    if args.json:
        out = {"density": density.name, "process": process.value,
               "report": report.to_dict(), "strategy": strategy_out}
        print(json.dumps(out))
    else:
        print(f"density:          {density.name}")
        print(f"process:          {process.value}")
        print(f"y:                {report.y!r}")
        print(f"numerator:        {report.numerator!r}")
        print(f"denominator:      {report.denominator!r}")
        if report.attainable:
            print(f"expected_benefit: {report.expected_benefit!r}")
        else:
            print("expected_benefit: unattainable (no event yields this observation)")
        print(f"decision:         {report.decision.value}")
        if strategy_out is not None:
            print(f"bounded decision: {strategy_out['decision']}"
                  f" (value {strategy_out['value']!r})")
    return 0 if report.attainable else 2


def cmd_table(args) -> int:
    density = _density_of(args)
    process = Process.parse(args.process)
    grid = make_grid(args.start, args.stop, args.count, args.scale)
    text = render_csv(density, process, grid)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_roots(args) -> int:
    density = _density_of(args)
    process = Process.parse(args.process)
    roots = find_exchange_roots(
        density, process, (args.lo, args.hi), tol=args.tol, cells=args.cells
    )
    if args.json:
        for r in roots:
            print(json.dumps({"y": r, "abs_e": abs(exchange_condition(density, process, r))}))
    elif not roots:
        print(f"no roots of the exchange condition in [{args.lo!r}, {args.hi!r}]")
    else:
        for r in roots:
            residual = abs(exchange_condition(density, process, r))
            print(f"root y={r!r}  |e(y)|={residual:.3e}")
    return 0


def cmd_catalog(args) -> int:
    entries = catalog_entries()
    if args.json:
        for entry in entries:
            print(json.dumps(entry))
        return 0
    width = max(len(e["name"]) for e in entries)
    for entry in entries:
        tag = entry["kind"] + ("" if entry["proper"] else ", improper")
        print(f"{entry['name']:<{width}}  [{tag}] {entry['description']}")
    return 0


def cmd_simulate(args) -> int:
    density = _density_of(args)
    process = Process.parse(args.process)
    seed = _default_seed(args.seed)
    if args.y is not None:
        estimate = mc_conditional_benefit(
            density, process, args.y, epsilon=args.eps, n=args.n, seed=seed
        )
        out = {"density": density.name, "process": process.value, "seed": seed}
        out.update(estimate.to_dict())
    else:
        if args.eps is not None:
            raise ValueError("--eps needs --y")
        n = args.n if args.n is not None else 100_000
        stats = play_statistics(density, process, n, seed=seed)
        out = {"density": density.name, "process": process.value, "seed": seed}
        out.update(stats.to_dict())
    print(json.dumps(out))
    return 0


def cmd_serve(args) -> int:
    from .server import build_server

    ui_dir = args.ui
    if ui_dir is None:
        # pick up the browser console bundle when serving from the repo root
        candidate = Path("frontend") / "public"
        if (candidate / "index.html").is_file():
            ui_dir = str(candidate)

    try:
        server = build_server(
            args.host, args.port,
            log_path=args.log, ui_dir=ui_dir, quiet=not args.verbose,
        )
    except OSError as exc:
        print(f"address-in-use: cannot bind {args.host}:{args.port} ({exc})",
              file=sys.stderr)
        return 1
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}/ (backend: {active_backend()})",
          file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


# -- verification suites ----------------------------------------------------

def _random_dyadic_density(rng: SplitMix64, tag: int) -> DiscreteDensity:
    """Random finite prior on dyadic points with exact rational masses."""
    count = 3 + rng.next_u64() % 6
    table: dict[DyadicRational, Fraction] = {}
    while len(table) < count:
        mantissa = 1 + rng.next_u64() % 64
        exponent = int(rng.next_u64() % 9) - 4
        point = DyadicRational(int(mantissa), exponent)
        table.setdefault(point, Fraction(1 + rng.next_u64() % 97))
    total = sum(table.values())
    table = {p: w / total for p, w in table.items()}
    return DiscreteDensity.from_table(f"random_dyadic_{tag}", table)


def _probe_points(density: DiscreteDensity) -> list[DyadicRational]:
    """Support points plus halves and doubles, so every branch fires."""
    probes: set[DyadicRational] = set()
    for point, _ in density.points(64):
        probes.update((point.halve(), point, point.double()))
    return sorted(probes, key=lambda p: p.as_fraction())


def verify_discrete(seed: int, trials: int, emit=print) -> bool:
    """Closed forms versus event enumeration on random finite priors.

    Where the event set carries no mass the enumeration has nothing to
    condition on; allocate-first is the one process whose closed form
    stays attainable there (the lottery value y/4 ignores the prior),
    so only the attainability flags are compared in that case.
    """
    rng = SplitMix64(seed)
    failures = 0
    checks = 0
    for trial in range(trials):
        density = _random_dyadic_density(rng, trial)
        for process in ALL_PROCESSES:
            for y in _probe_points(density):
                expected = expected_benefit(density, process, y)
                oracle = enumerate_conditional_benefit(density, process, y)
                checks += 1
                if oracle.attainable:
                    ok = expected.attainable and (
                        abs(expected.expected_benefit - oracle.expected_benefit) <= 1e-12
                    )
                elif process is Process.ALLOCATE_FIRST_THEN_PRIME:
                    ok = expected.attainable
                else:
                    ok = not expected.attainable
                if not ok:
                    failures += 1
                    emit(f"[fail] discrete {density.name} {process.value} y={float(y)!r}: "
                         f"closed={expected.expected_benefit!r} "
                         f"oracle={oracle.expected_benefit!r}")
    emit(f"[{'ok' if failures == 0 else 'fail'}] discrete suite: "
         f"{checks - failures}/{checks} agreements at 1e-12")
    return failures == 0


_MC_POINTS = {
    "uniform01": (0.3, 0.45, 0.6),
    "rayleigh_half": (0.4, 0.832, 1.1),
    "broome_continuous": (0.5, 1.0, 2.5),
}


def verify_mc(seed: int, plays: int, emit=print) -> bool:
    """Closed forms versus seeded Monte-Carlo at 4 sigma."""
    failures = 0
    checks = 0
    for name, points in _MC_POINTS.items():
        density = catalog_lookup(name, {})
        for process in ALL_PROCESSES:
            for i, y in enumerate(points):
                analytic = expected_benefit(density, process, y)
                estimate = mc_conditional_benefit(
                    density, process, y, n=plays, seed=seed + i
                )
                report = compare(analytic, estimate, k_sigma=4.0)
                checks += 1
                if not report.passed:
                    failures += 1
                    emit(f"[fail] mc {name} {process.value} y={y}: "
                         f"delta={report.delta:.3e} band={report.band:.3e}")
    emit(f"[{'ok' if failures == 0 else 'fail'}] mc suite: "
         f"{checks - failures}/{checks} within 4 sigma "
         f"({plays} plays each, backend {active_backend()})")
    return failures == 0


def cmd_verify(args) -> int:
    seed = _default_seed(args.seed)
    ok = True
    if args.suite in ("discrete", "all"):
        ok = verify_discrete(seed, args.trials) and ok
    if args.suite in ("mc", "all"):
        ok = verify_mc(seed, args.plays) and ok
    return 0 if ok else 1


_COMMANDS = {
    "eval": cmd_eval,
    "table": cmd_table,
    "roots": cmd_roots,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
    "simulate": cmd_simulate,
    "serve": cmd_serve,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; fold into the malformed-input code
        return 1 if exc.code else 0
    try:
        return _COMMANDS[args.command](args)
    except (EnvelopeError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
