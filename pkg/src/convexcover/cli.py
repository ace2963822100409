"""Command line entry point: generate, solve, verify, score, render, bench."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from .cliquecover import solve_cliquecover
from .generators import GENERATORS, CheeseParams, GeneratorStall, InvalidParams, MazeParams
from .greedy import solve_greedy_merge
from .model import (
    InvalidInstance,
    InvalidSolution,
    ParseError,
    parse_instance,
    parse_solution,
    serialize_instance,
    serialize_solution,
)
from .parallel import pmap
from .render import render_svg
from .scoring import MissingInstance, build_leaderboard
from .setcover import Schedule, SetCoverConfig, solve_setcover
from .triangulate import SteinerPolicy
from .verify import WrongInstance, verify_solution

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2
SOLVERS = ("greedy", "cliquecover", "setcover")

log = logging.getLogger("convexcover")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _write(path: str | None, data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


def _read_instance(path: str):
    return parse_instance(Path(path).read_bytes())


def _read_solution(path: str):
    return parse_solution(Path(path).read_bytes())


# --- subcommands -------------------------------------------------------------

def cmd_generate(args) -> int:
    if args.kind == "maze":
        params = MazeParams(
            grid_cols=args.cols, grid_rows=args.rows, cell_size=args.cell,
            removal_fraction=Fraction(args.removal), perturbation_fraction=Fraction(args.perturb),
            perturbation_magnitude=args.magnitude, seed=args.seed,
        )
    else:
        params = CheeseParams(
            target_holes=args.holes, field_width=args.width, field_height=args.height,
            hole_vertex_range=(args.min_vertices, args.max_vertices), hole_radius=args.radius,
            seed=args.seed,
        )
    _write(args.out, serialize_instance(GENERATORS[args.kind](params)))
    return EXIT_OK


def run_solver(inst, algo: str, seed: int = 0, restarts: int = 1, steiner: str = "none",
               gen: str = "cliques", cap: int | None = None, steps: int | None = None,
               workers: int | None = None):
    if algo == "greedy":
        return solve_greedy_merge(inst, seed=seed, restarts=restarts, workers=workers)
    if algo == "cliquecover":
        return solve_cliquecover(inst, SteinerPolicy(steiner), seed)
    if algo == "setcover":
        config = SetCoverConfig(generator=gen, cap=cap, schedule=Schedule(steps=steps),
                                policy=SteinerPolicy(steiner), seed=seed)
        return solve_setcover(inst, config)
    raise UsageError(f"unknown algorithm {algo!r}")


def cmd_solve(args) -> int:
    inst = _read_instance(args.instance)
    sol = run_solver(inst, args.algo, args.seed, args.restarts, args.steiner, args.gen, args.cap,
                     args.steps, args.workers)
    _write(args.out, serialize_solution(sol))
    log.info("%s: %s pieces with %s", inst.name, sol.k, args.algo)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify_solution(_read_instance(args.instance), _read_solution(args.solution))
    print(report.summary())
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_score(args) -> int:
    table = build_leaderboard(args.instances, args.solutions, args.workers)
    sys.stdout.write(table.format_table())
    if args.json:
        Path(args.json).write_text(table.dumps())
    return EXIT_OK


def cmd_render(args) -> int:
    inst = _read_instance(args.instance)
    sol = None
    if args.solution:
        sol = _read_solution(args.solution)
        if not args.allow_invalid:
            report = verify_solution(inst, sol)
            if not report.valid:
                print(report.summary(), file=sys.stderr)
                return EXIT_INVALID
    _write(args.out, render_svg(inst, sol))
    return EXIT_OK


def _bench_job(job):
    path, algo, seed, out_dir = job
    inst = _read_instance(path)
    t0 = time.perf_counter()
    sol = run_solver(inst, algo, seed)
    dt = time.perf_counter() - t0
    report = verify_solution(inst, sol)
    if out_dir:
        target = Path(out_dir) / algo
        target.mkdir(parents=True, exist_ok=True)
        (target / f"{inst.name}.json").write_bytes(serialize_solution(sol))
    return inst.name, algo, sol.k, report.valid, dt


def bench_rows(instance_dir, solvers=SOLVERS, seed: int = 0, out_dir=None, workers=None) -> list[tuple]:
    paths = sorted(str(p) for p in Path(instance_dir).glob("*.json"))
    jobs = [(p, algo, seed, out_dir) for p in paths for algo in solvers]
    return pmap(_bench_job, jobs, workers)


def cmd_bench(args) -> int:
    rows = bench_rows(args.instances, args.solvers, args.seed, args.out, args.workers)
    header = ("instance", "solver", "pieces", "valid", "seconds")
    table = [header] + [(n, a, str(k), "yes" if ok else "NO", f"{dt:.2f}") for n, a, k, ok, dt in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    for r in table:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return EXIT_OK if all(ok for *_, ok, _ in rows) else EXIT_INVALID


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="convexcover", description="Minimum convex cover toolkit.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="generate a benchmark instance")
    g.add_argument("--kind", choices=sorted(GENERATORS), required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=None)
    g.add_argument("--holes", type=int, default=10)
    g.add_argument("--width", type=int, default=1000)
    g.add_argument("--height", type=int, default=1000)
    g.add_argument("--radius", type=int, default=30)
    g.add_argument("--min-vertices", type=int, default=3)
    g.add_argument("--max-vertices", type=int, default=6)
    g.add_argument("--cols", type=int, default=5)
    g.add_argument("--rows", type=int, default=5)
    g.add_argument("--cell", type=int, default=10)
    g.add_argument("--removal", default="1/10")
    g.add_argument("--perturb", default="1/2")
    g.add_argument("--magnitude", type=int, default=4)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="solve an instance")
    s.add_argument("-i", "--instance", required=True)
    s.add_argument("-o", "--out", default=None)
    s.add_argument("--algo", choices=SOLVERS, default="cliquecover")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=1)
    s.add_argument("--steiner", choices=[x.value for x in SteinerPolicy], default="none")
    s.add_argument("--gen", choices=["cliques", "bloat", "both"], default="cliques")
    s.add_argument("--cap", type=int, default=None)
    s.add_argument("--steps", type=int, default=None)
    s.add_argument("--workers", type=int, default=None)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a solution exactly")
    v.add_argument("-i", "--instance", required=True)
    v.add_argument("-s", "--solution", required=True)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    sc = sub.add_parser("score", help="leaderboard over team solution directories")
    sc.add_argument("--instances", required=True)
    sc.add_argument("--solutions", required=True)
    sc.add_argument("--json", default=None)
    sc.add_argument("--workers", type=int, default=None)
    sc.add_argument("--seed", type=int, default=0)
    sc.set_defaults(func=cmd_score)

    r = sub.add_parser("render", help="draw an instance and optional solution as SVG")
    r.add_argument("-i", "--instance", required=True)
    r.add_argument("-s", "--solution", default=None)
    r.add_argument("-o", "--out", default=None)
    r.add_argument("--allow-invalid", action="store_true")
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(func=cmd_render)

    b = sub.add_parser("bench", help="run solvers over an instance directory")
    b.add_argument("--instances", required=True)
    b.add_argument("--solvers", nargs="+", choices=SOLVERS, default=list(SOLVERS))
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", default=None, help="directory for solution files")
    b.add_argument("--workers", type=int, default=None)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except (OSError, ParseError, InvalidInstance, InvalidSolution, InvalidParams, WrongInstance,
            MissingInstance, GeneratorStall, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
