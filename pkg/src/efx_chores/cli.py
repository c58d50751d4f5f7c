"""Command line: ``efx-chores {solve,verify,generate,enumerate,bench}``.

Exit codes: 0 success (every reported allocation is EFX), 1 an allocation
failed EFX, 2 bad input, 3 no applicable algorithm or enumeration cap hit.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import fileio
from .algorithms import solve, solve_bivalued_three, solve_identical_ordering, solve_small_m
from .errors import CapExceeded, InputError
from .generators import GENERIC, GeneratorSpec, generate, parse_target
from .model import RegimeKind
from .oracle import DEFAULT_CAP, enumerate_efx, envy_report, is_ef1

EXIT_OK, EXIT_NOT_EFX, EXIT_INPUT, EXIT_NA = 0, 1, 2, 3

REGIME_NAMES = [k.value for k in RegimeKind if k is not RegimeKind.UNSUPPORTED]


def _out_path(base: Path, regime: str, several: bool) -> Path:
    if not several:
        return base
    return base.with_name(f"{base.stem}.{regime}{base.suffix or '.json'}")


def cmd_solve(args) -> int:
    inst = fileio.read_instance(args.instance)
    only = [RegimeKind(args.regime)] if args.regime else None
    t0 = time.perf_counter()
    result = solve(inst, only)
    elapsed = time.perf_counter() - t0
    print(f"instance: n={inst.n} m={inst.m}")
    print("regimes: " + ", ".join(r.describe() for r in result.regimes))
    if not result.supported:
        print(f"error: {result.notice}", file=sys.stderr)
        return EXIT_NA
    code = EXIT_OK
    several = len(result.solutions) > 1
    for regime, alloc in result.solutions.items():
        name = regime.kind.value
        report = envy_report(inst, alloc)
        if not report.efx:
            code = EXIT_NOT_EFX
        print(f"[{name}] EFX: {str(report.efx).lower()}")
        if args.out:
            path = _out_path(Path(args.out), name, several)
            fileio.write_allocation(alloc, path)
            print(f"[{name}] wrote {path}")
        else:
            print(f"[{name}] allocation: " + fileio.dumps(fileio.allocation_to_json(alloc)).strip())
    print(f"time: {elapsed * 1000:.2f} ms")
    return code


def cmd_verify(args) -> int:
    inst = fileio.read_instance(args.instance)
    alloc = fileio.read_allocation(args.allocation)
    alloc.check_for(inst, complete=True)
    report = envy_report(inst, alloc)
    print(f"EFX: {str(report.efx).lower()}")
    print(f"EF1: {str(is_ef1(inst, alloc)).lower()}")
    for line in report.lines() or ["no envy"]:
        print(line)
    return EXIT_OK if report.efx else EXIT_NOT_EFX


def cmd_generate(args) -> int:
    spec = GeneratorSpec(parse_target(args.regime), args.n, args.m, args.seed, args.max_cost)
    text = fileio.dumps(fileio.instance_to_json(generate(spec)))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    inst = fileio.read_instance(args.instance)
    try:
        found = enumerate_efx(inst, args.cap)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NA
    print(f"EFX allocations: {len(found)}")
    if args.list:
        for alloc in found:
            print(fileio.dumps(fileio.allocation_to_json(alloc)).strip())
    return EXIT_OK


_BENCH = [
    ("small_m", RegimeKind.SMALL_M, 50, 100, solve_small_m),
    ("identical_ordering", RegimeKind.IDENTICAL_ORDERING, 50, 500, solve_identical_ordering),
    ("bivalued_three", RegimeKind.BIVALUED_THREE, 3, 10_000, solve_bivalued_three),
]


def cmd_bench(args) -> int:
    from .oracle import is_efx
    code = EXIT_OK
    for name, kind, n, m, solver in _BENCH:
        if args.regime and args.regime != name:
            continue
        times = []
        for k in range(args.repeat):
            inst = generate(GeneratorSpec(kind, n, m, args.seed + k))
            t0 = time.perf_counter()
            alloc = solver(inst)
            times.append(time.perf_counter() - t0)
            if not is_efx(inst, alloc):
                code = EXIT_NOT_EFX
        print(f"{name:20s} n={n:<3d} m={m:<6d} best {min(times):.3f}s  worst {max(times):.3f}s")
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="efx-chores", description="EFX allocations of indivisible chores.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run every applicable solver on an instance")
    s.add_argument("instance")
    s.add_argument("--regime", choices=REGIME_NAMES)
    s.add_argument("--out", help="allocation file (regime name is inserted when several)")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check an allocation for EFX and EF1")
    v.add_argument("instance")
    v.add_argument("allocation")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("generate", help="write a seeded random instance")
    g.add_argument("--regime", default=GENERIC, choices=REGIME_NAMES + [GENERIC])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--max-cost", type=int, default=100)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("enumerate", help="count EFX allocations by brute force")
    e.add_argument("instance")
    e.add_argument("--cap", type=int, default=DEFAULT_CAP)
    e.add_argument("--list", action="store_true")
    e.set_defaults(func=cmd_enumerate)

    b = sub.add_parser("bench", help="time each solver on large generated instances")
    b.add_argument("--regime", choices=REGIME_NAMES)
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--repeat", type=int, default=3)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
