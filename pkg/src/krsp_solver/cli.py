"""Command-line front end: solve one instance or run the oracle bench."""

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from pydantic import ValidationError

from krsp_solver.bench import SuiteSpec, generate_suite, load_suite, run_bench
from krsp_solver.config import parse_rational, settings
from krsp_solver.exceptions import KrspError
from krsp_solver.graph.core import Instance
from krsp_solver.graph.generator import gen_random_instance
from krsp_solver.graph.io import parse_instance, render_instance
from krsp_solver.solver import SolverOptions, solve
from krsp_solver.tools.solve import solution_payload
from krsp_solver.utils.logging import setup_logging, solve_scope

logger = logging.getLogger(__name__)

EXIT_SOLVED = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


class _ArgumentParser(argparse.ArgumentParser):
    """Reports bad flags with the error exit code instead of argparse's 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="krsp",
        description="k disjoint delay-bounded paths at no more than twice the optimal cost.",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", metavar="FILE", help="instance file ('-' for stdin)")
    source.add_argument("--gen", metavar="n,m,maxc,maxd,k,seed", help="generate a random instance")
    source.add_argument(
        "--bench",
        metavar="DIR|SPEC",
        nargs="?",
        const="",
        help="run the oracle bench on a directory of instances or a 'count,nmin,nmax,k,maxc,maxd,seed' suite",
    )

    parser.add_argument("--delay-bound", type=int, metavar="D", help="override the delay bound")
    parser.add_argument("--mode", choices=["exact", "scaled"], default=settings.mode)
    parser.add_argument("--eps", metavar="R", help="set both epsilons")
    parser.add_argument("--eps1", metavar="R", help="delay slack for scaled mode")
    parser.add_argument("--eps2", metavar="R", help="cost slack for scaled mode")
    parser.add_argument("--phase1", choices=["mincost", "lp-round"], default=settings.phase1_mode)
    parser.add_argument("--cycles", choices=["lp", "enumerate", "hybrid"], default=settings.cycle_source)
    parser.add_argument("--bmax", type=int, metavar="N", help="largest cost budget swept")
    parser.add_argument("--binary-search-b", action="store_true", help="bisect on the cost budget")
    parser.add_argument("--trace", action="store_true", help="emit every iteration record")
    parser.add_argument("--max-iterations", type=int, metavar="N")
    parser.add_argument("--no-refine", action="store_true", help="skip estimate bisection")

    parser.add_argument("--json", action="store_true", help="bench: print JSON instead of a table")
    parser.add_argument("--workers", type=int, default=1, help="bench: worker processes")
    parser.add_argument("--timings", action="store_true", help="bench: include timings in JSON")
    parser.add_argument("--no-audit", action="store_true", help="bench: skip the acceptance audit")
    parser.add_argument(
        "--measure-lp",
        metavar="DIR",
        help="bench: measure pure LP-sweep completeness and archive misses in DIR",
    )
    parser.add_argument("--emit-instance", action="store_true", help="print the instance text and exit")
    parser.add_argument("--log-level", default=None, help="logging level (default: KRSP_LOG_LEVEL)")
    return parser


def options_from_args(args: argparse.Namespace) -> SolverOptions:
    eps1 = args.eps1 or args.eps
    eps2 = args.eps2 or args.eps
    overrides = {
        "mode": args.mode,
        "phase1_mode": args.phase1,
        "cycle_source": args.cycles,
        "bmax": args.bmax,
        "binary_search_b": args.binary_search_b,
        "trace": args.trace,
    }
    if eps1 is not None:
        overrides["epsilon1"] = parse_rational(eps1)
    if eps2 is not None:
        overrides["epsilon2"] = parse_rational(eps2)
    if args.max_iterations is not None:
        overrides["max_iterations"] = args.max_iterations
    if args.no_refine:
        overrides["refine_estimate"] = False
    return SolverOptions(**overrides)


def _parse_gen(text: str) -> Instance:
    fields = text.split(",")
    if len(fields) != 6:
        raise ValueError(f"--gen needs n,m,maxc,maxd,k,seed, got {text!r}")
    n, m, max_cost, max_delay, k, seed = (int(f) for f in fields)
    return gen_random_instance(n, m, max_cost, max_delay, k, seed)


def load_instance(args: argparse.Namespace) -> Instance:
    if args.gen:
        inst = _parse_gen(args.gen)
    elif args.input == "-":
        inst = parse_instance(sys.stdin.read())
    else:
        inst = parse_instance(Path(args.input).read_text())
    if args.delay_bound is not None:
        inst = inst.with_delay_bound(args.delay_bound)
    return inst


def run_solve(args: argparse.Namespace) -> int:
    """Solve one instance and print the JSON result on stdout."""
    inst = load_instance(args)
    if args.emit_instance:
        sys.stdout.write(render_instance(inst))
        return EXIT_SOLVED
    opts = options_from_args(args)
    started = time.perf_counter()
    with solve_scope(Path(args.input).name if args.input else f"gen:{args.gen}"):
        solution = solve(inst, opts)
    payload = solution_payload(
        solution, (time.perf_counter() - started) * 1000, with_trace=args.trace
    )
    print(json.dumps(payload, indent=2))
    return EXIT_SOLVED if solution.status == "solved" else EXIT_INFEASIBLE


def run_bench_command(args: argparse.Namespace) -> int:
    """Run the bench and print a table (or JSON with --json)."""
    opts = options_from_args(args)
    cases = load_suite(args.bench) if args.bench else generate_suite(SuiteSpec.default())
    summary = run_bench(
        cases,
        opts,
        workers=max(1, args.workers),
        audit=not args.no_audit,
        lp_archive=Path(args.measure_lp) if args.measure_lp else None,
    )
    if args.json:
        print(json.dumps(summary.to_json(timings=args.timings), indent=2, sort_keys=True))
    else:
        print(summary.to_table())
    return EXIT_ERROR if summary.failures else EXIT_SOLVED


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    try:
        if args.bench is not None:
            return run_bench_command(args)
        return run_solve(args)
    except (KrspError, ValidationError, ValueError, OSError) as e:
        print(f"krsp: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
