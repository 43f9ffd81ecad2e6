"""Command-line entry point: solve, check, gen, plot and bench.

Exit codes: 0 success or feasible, 1 infeasible or no solution,
2 usage error, 3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

from .axis_fpt import InseparableError, Solution, solve_axis_parallel, solve_axis_parallel_literal
from .exact_search import DEFAULT_BUDGET, ResourceLimitError, axis_candidates, solve_axis_bruteforce, solve_general_bruteforce
from .geometry import Instance, Point, is_feasible
from .io import ParseError, emit_instance, emit_solution, parse_instance, parse_solution
from .reduction import (
    DEFAULT_BIT_BUDGET,
    LayoutOverflowError,
    build_rbs_instance,
    emit_s2ths,
    layout_sidecar,
    parse_s2ths,
    random_planted_instance,
    solve_s2ths_bruteforce,
    witness_lines,
)

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
THREADS_ENV = "RBSEP_THREADS"
BENCH_COLUMNS = ["instance", "n", "|B|", "method", "cost", "wall_ms"]


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def run_solver(instance: Instance, method: str, general: bool, kmax: Optional[int], budget: int) -> Optional[Solution]:
    """Dispatch to a solver; None means nothing was found within kmax."""
    if general:
        if method != "bruteforce":
            raise UsageError("--general only supports --method bruteforce")
        if instance.inseparable:
            raise InseparableError("a red point coincides with a blue point")
        limit = kmax if kmax is not None else len(set(instance.red)) * len(set(instance.blue))
        return solve_general_bruteforce(instance, limit, budget)
    if method == "fpt":
        return solve_axis_parallel(instance)
    if method == "fpt-literal":
        return solve_axis_parallel_literal(instance)
    if instance.inseparable:
        raise InseparableError("a red point coincides with a blue point")
    limit = kmax if kmax is not None else len(axis_candidates(instance).lines())
    return solve_axis_bruteforce(instance, limit, budget)


def _inseparable_message(instance: Instance) -> str:
    pair = instance.coincident_pair()
    return f"inseparable: a red and a blue point coincide at {pair[0]!r}" if pair else "inseparable"


def cmd_solve(args: argparse.Namespace) -> int:
    if args.general and args.axis_parallel:
        raise UsageError("choose one of --axis-parallel and --general")
    if args.method in ("fpt", "fpt-literal") and args.general:
        raise UsageError(f"--method {args.method} requires --axis-parallel")
    instance = parse_instance(_read(args.instance))
    try:
        sol = run_solver(instance, args.method, args.general, args.kmax, args.budget)
    except InseparableError:
        print(_inseparable_message(instance), file=sys.stderr)
        return EXIT_INFEASIBLE
    if sol is None:
        print(f"no solution with at most {args.kmax} lines", file=sys.stderr)
        return EXIT_INFEASIBLE
    text = emit_solution(sol.lines, sol.solver)
    if args.out:
        _write(args.out, text)
        print(f"cost {sol.cost}")
    else:
        sys.stdout.write(text)
    if args.svg:
        from .plotting import plot_instance

        plot_instance(instance, sol.lines, args.svg, title=f"cost {sol.cost} ({sol.solver})")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    instance = parse_instance(_read(args.instance))
    sol = parse_solution(_read(args.solution))
    report = is_feasible(instance, sol.lines)
    print(report.describe())
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def gen_random(n_red: int, n_blue: int, grid: int, seed: int) -> Instance:
    """Points drawn uniformly from the integer grid [0, grid]^2.

    Blue draws landing on a red point are redrawn, so the instance stays
    separable whenever the grid has a free spot.
    """
    rng = random.Random(seed)
    red = [Point.of(rng.randint(0, grid), rng.randint(0, grid)) for _ in range(n_red)]
    taken = set(red)
    if len(taken) >= (grid + 1) ** 2 and n_blue:
        raise UsageError("the grid has no room for blue points")
    blue = []
    while len(blue) < n_blue:
        p = Point.of(rng.randint(0, grid), rng.randint(0, grid))
        if p not in taken:
            blue.append(p)
    return Instance(red, blue)


def gen_grid(rows: int, cols: int, block: int) -> Instance:
    """A rows x cols lattice coloured in a checkerboard of block x block tiles."""
    red, blue = [], []
    for r in range(rows):
        for c in range(cols):
            (red if (r // block + c // block) % 2 == 0 else blue).append(Point.of(c, r))
    return Instance(red, blue)


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "random":
        inst = gen_random(args.red, args.blue, args.grid, args.seed)
        _write(args.out, emit_instance(inst, f"random red={args.red} blue={args.blue} grid={args.grid} seed={args.seed}"))
        return EXIT_OK
    if args.kind == "grid":
        inst = gen_grid(args.rows, args.cols, args.block)
        _write(args.out, emit_instance(inst, f"grid rows={args.rows} cols={args.cols} block={args.block}"))
        return EXIT_OK
    # reduction
    witness = None
    if args.s2ths:
        try:
            s2 = parse_s2ths(_read(args.s2ths))
        except ValueError as exc:
            raise UsageError(f"{args.s2ths}: {exc}") from exc
    elif args.k is not None and args.t is not None:
        s2, witness = random_planted_instance(args.k, args.t, random.Random(args.seed), args.intervals)
    else:
        raise UsageError("gen reduction needs --s2ths FILE or both --k and --t")
    if args.emit_s2ths:
        _write(args.emit_s2ths, emit_s2ths(s2))
    try:
        inst, layout = build_rbs_instance(s2, args.bit_budget)
    except LayoutOverflowError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    _write(args.out, emit_instance(inst, f"reduction k={s2.k} t={s2.t} points={inst.n}"))
    if args.layout:
        _write(args.layout, layout_sidecar(layout))
    if args.witness_out:
        if witness is None:
            try:
                witness = solve_s2ths_bruteforce(s2)
            except ValueError as exc:
                print(f"resource limit: {exc}", file=sys.stderr)
                return EXIT_RESOURCE
        if witness is None:
            print("the S2-THS instance has no solution; no witness lines written", file=sys.stderr)
            return EXIT_INFEASIBLE
        lines = witness_lines(s2, layout, witness)
        _write(args.witness_out, emit_solution(lines, "witness"))
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    from .plotting import plot_instance

    instance = parse_instance(_read(args.instance))
    lines = parse_solution(_read(args.solution)).lines if args.solution else ()
    plot_instance(instance, lines, args.svg, title=args.title)
    return EXIT_OK


def _bench_one(job) -> List[dict]:
    name, text, methods, kmax, budget, timing = job
    instance = parse_instance(text)
    rows = []
    for method in methods:
        start = time.perf_counter()
        try:
            sol = run_solver(instance, method, False, kmax, budget)
            cost = "NA" if sol is None else str(sol.cost)
        except InseparableError:
            cost = "inseparable"
        except ResourceLimitError:
            cost = "budget"
        elapsed = (time.perf_counter() - start) * 1000
        rows.append(
            {
                "instance": name,
                "n": instance.n,
                "|B|": len(instance.blue),
                "method": method,
                "cost": cost,
                "wall_ms": f"{elapsed:.3f}" if timing else "",
            }
        )
    return rows


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")


def bench_rows(paths: Sequence[Path], methods: Sequence[str], kmax: Optional[int], budget: int, timing: bool) -> List[dict]:
    """One row per (instance, method), in input order whatever the thread count."""
    jobs = [(p.name, p.read_text(), tuple(methods), kmax, budget, timing) for p in paths]
    workers = thread_count()
    if workers == 1 or len(jobs) < 2:
        results = [_bench_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_bench_one, jobs))
    return [row for rows in results for row in rows]


def format_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_bench(args: argparse.Namespace) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        raise UsageError(f"{corpus} is not a directory")
    paths = sorted(corpus.glob(args.pattern))
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in ("fpt", "fpt-literal", "bruteforce"):
            raise UsageError(f"unknown method {m!r}")
    rows = bench_rows(paths, methods, args.kmax, args.budget, not args.omit_timing)
    _write(args.csv, format_csv(rows))
    if args.figure:
        from .plotting import plot_bench

        plot_bench(rows, args.figure, "cost" if args.omit_timing else "wall_ms")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rbsep", description="Red-blue separation by lines.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="minimum separating line set")
    s.add_argument("instance")
    s.add_argument("--axis-parallel", action="store_true", help="axis-parallel lines (default)")
    s.add_argument("--general", action="store_true", help="arbitrary slopes (bruteforce only)")
    s.add_argument("--method", choices=["fpt", "fpt-literal", "bruteforce"], default=None)
    s.add_argument("--kmax", type=int, default=None, help="line limit for bruteforce")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node budget for bruteforce")
    s.add_argument("--out", help="solution file (default: stdout)")
    s.add_argument("--svg", help="also render the solution")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="verify a solution against an instance")
    c.add_argument("instance")
    c.add_argument("solution")
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("gen", help="generate instances")
    g.add_argument("kind", choices=["random", "grid", "reduction"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="instance file (default: stdout)")
    g.add_argument("--red", type=int, default=10)
    g.add_argument("--blue", type=int, default=4)
    g.add_argument("--grid", type=int, default=6, help="coordinates drawn from [0, grid]")
    g.add_argument("--rows", type=int, default=4)
    g.add_argument("--cols", type=int, default=4)
    g.add_argument("--block", type=int, default=1)
    g.add_argument("--s2ths", help="S2-THS description file")
    g.add_argument("--k", type=int, help="planted S2-THS: number of classes")
    g.add_argument("--t", type=int, help="planted S2-THS: class size")
    g.add_argument("--intervals", type=int, default=4, help="planted S2-THS: intervals per track")
    g.add_argument("--emit-s2ths", help="write the S2-THS description used")
    g.add_argument("--layout", help="write the layout sidecar (JSON)")
    g.add_argument("--witness-out", help="write the 6k+14 witness lines")
    g.add_argument("--bit-budget", type=int, default=DEFAULT_BIT_BUDGET)
    g.set_defaults(func=cmd_gen)

    pl = sub.add_parser("plot", help="render an instance and optional solution to SVG")
    pl.add_argument("instance")
    pl.add_argument("solution", nargs="?")
    pl.add_argument("--svg", required=True)
    pl.add_argument("--title")
    pl.set_defaults(func=cmd_plot)

    b = sub.add_parser("bench", help="solve a corpus and write a CSV")
    b.add_argument("corpus")
    b.add_argument("--csv", help="CSV output (default: stdout)")
    b.add_argument("--pattern", default="*.txt")
    b.add_argument("--methods", default="fpt,bruteforce")
    b.add_argument("--kmax", type=int, default=None)
    b.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    b.add_argument("--figure", help="bar chart of the table")
    b.add_argument("--omit-timing", action="store_true", help="leave wall_ms empty for byte-stable output")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve" and args.method is None:
        args.method = "bruteforce" if args.general else "fpt"
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
