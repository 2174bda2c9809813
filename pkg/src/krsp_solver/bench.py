"""Oracle-backed benchmark and acceptance harness."""

import hashlib
import json
import logging
import math
import random
import time
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from pydantic import BaseModel, ConfigDict

from krsp_solver.bicameral.classify import SearchContext
from krsp_solver.bicameral.search import find_bicameral
from krsp_solver.config import settings
from krsp_solver.exceptions import KrspError, OracleSizeError
from krsp_solver.flow.phase1 import check_feasible, phase1_solution
from krsp_solver.flow.residual import build_residual
from krsp_solver.graph.core import Cycle, Instance, PathSet
from krsp_solver.graph.generator import gen_random_instance
from krsp_solver.graph.io import parse_instance, render_instance
from krsp_solver.oracle.brute import brute_delay_range, brute_krsp
from krsp_solver.oracle.cycles import enumerate_simple_cycles
from krsp_solver.oracle.verify import verify_bicameral
from krsp_solver.solver.loop import iteration_cap, run_cancellation, solve
from krsp_solver.solver.options import IterationRecord, Solution, SolverOptions
from krsp_solver.utils.logging import solve_scope
from krsp_solver.utils.serialization import format_fraction, to_jsonable

logger = logging.getLogger(__name__)


class BenchCase(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    instance: Instance


class SuiteSpec(BaseModel):
    """Generator parameters: "count,nmin,nmax,k,maxc,maxd,seed"."""

    count: int
    min_vertices: int
    max_vertices: int
    k: int
    max_cost: int
    max_delay: int
    seed: int

    @classmethod
    def parse(cls, text: str) -> "SuiteSpec":
        fields = [f.strip() for f in text.split(",")]
        if len(fields) != 7:
            raise ValueError(f"suite spec needs 7 comma-separated integers, got {text!r}")
        try:
            values = [int(f) for f in fields]
        except ValueError as e:
            raise ValueError(f"suite spec has a non-integer field: {text!r}") from e
        names = ["count", "min_vertices", "max_vertices", "k", "max_cost", "max_delay", "seed"]
        return cls(**dict(zip(names, values, strict=True)))

    @classmethod
    def default(cls) -> "SuiteSpec":
        return cls(
            count=settings.bench_count,
            min_vertices=settings.bench_min_vertices,
            max_vertices=settings.bench_max_vertices,
            k=settings.bench_k,
            max_cost=settings.bench_max_cost,
            max_delay=settings.bench_max_delay,
            seed=settings.bench_seed,
        )


def midpoint_delay_bound(inst: Instance) -> int:
    """Midpoint of the smallest and largest total delay of any k disjoint paths (0 if none)."""
    span = brute_delay_range(inst)
    if span is None:
        return 0
    return (span[0] + span[1]) // 2


def generate_suite(spec: SuiteSpec) -> list[BenchCase]:
    """Seeded instances with n in [nmin, nmax], m in [n, 2n] and D at the delay midpoint."""
    rng = random.Random(spec.seed)
    cases = []
    for index in range(spec.count):
        n = rng.randint(spec.min_vertices, spec.max_vertices)
        m = rng.randint(n, 2 * n)
        inst = gen_random_instance(n, m, spec.max_cost, spec.max_delay, spec.k, rng.randrange(2**31))
        inst = inst.with_delay_bound(midpoint_delay_bound(inst))
        cases.append(BenchCase(name=f"gen-{index:04d}", instance=inst))
    return cases


def load_suite(source: str) -> list[BenchCase]:
    """Cases from a directory of instance files, or from a generator spec."""
    path = Path(source)
    if path.is_dir():
        cases = []
        for file in sorted(p for p in path.iterdir() if p.is_file()):
            try:
                cases.append(BenchCase(name=file.name, instance=parse_instance(file.read_text())))
            except KrspError as e:
                logger.warning(f"Skipping {file.name}: {e}")
        return cases
    return generate_suite(SuiteSpec.parse(source))


class BenchRow(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    n: int
    m: int
    D: int
    oracle_feasible: bool | None
    status: str
    c_opt: int | None = None
    cost: int | None = None
    delay: int | None = None
    cost_ratio: Fraction | None = None
    delay_slack: int | None = None
    iterations: int = 0
    cost_estimate: int | None = None
    estimate_within_growth: bool | None = None
    lp_misses: int = 0
    audit_failures: tuple[str, ...] = ()
    skipped: str | None = None
    time_ms: float = 0.0


def _replay(
    inst: Instance, initial: PathSet, trace: Sequence[IterationRecord]
) -> Iterator[tuple[PathSet, IterationRecord]]:
    """Pair each record with the path set it was applied to."""
    state = initial
    for record in trace:
        yield state, record
        state = PathSet.from_paths([inst.edge(i) for i in path] for path in record.path_edge_ids)


def _audit_trace(
    inst: Instance, initial: PathSet, trace: Sequence[IterationRecord], c_hat: int
) -> list[str]:
    """Negative-delay witness and bicameral soundness for every recorded step."""
    failures = []
    for state, record in _replay(inst, initial, trace):
        residual = build_residual(inst, state)
        if inst.n <= settings.cycle_enum_max_vertices and not any(
            c.delay < 0 for c in enumerate_simple_cycles(residual)
        ):
            failures.append(f"step {record.index}: no negative-delay cycle while over D")
        ctx = SearchContext.for_paths(residual, state, c_hat)
        cycle = Cycle(tuple(residual.edges[i] for i in record.cycle))
        if not verify_bicameral(cycle, ctx):
            failures.append(f"step {record.index}: cycle {list(record.cycle)} is not bicameral")
    if len(trace) > iteration_cap(inst):
        failures.append(f"{len(trace)} iterations exceed the cap {iteration_cap(inst)}")
    return failures


def _audit_monotone(trace: Sequence[IterationRecord], c_hat: int) -> list[str]:
    failures = []
    for before, after in zip(trace, trace[1:], strict=False):
        if before.r is None or after.r is None:
            continue
        if not (after.r > before.r or (after.r == before.r and after.D < before.D)):
            failures.append(
                f"steps {before.index}->{after.index}: r went from "
                f"{format_fraction(before.r)} to {format_fraction(after.r)}"
            )
    for record in trace:
        if record.C > c_hat:
            failures.append(f"step {record.index}: cost {record.C} above estimate {c_hat}")
    return failures


def audit_run(
    inst: Instance,
    solution: Solution,
    c_opt: int,
    opts: SolverOptions,
    *,
    lp_archive: Path | None = None,
) -> tuple[list[str], int]:
    """Check a solved feasible instance against the oracle optimum.

    Covers the bifactor bound, the negative-delay witness and bicameral
    soundness along the solver's own trace, and a second cancellation run
    with the estimate pinned to ``c_opt`` that must find a cycle at every
    over-delay state, keep the ratio monotone and stay within the cap. With
    ``lp_archive`` set, every state where the pure LP sweep misses is
    written there as JSON.

    Returns:
        Failure messages and the number of LP misses
    """
    failures: list[str] = []
    paths = solution.paths
    assert paths is not None
    if opts.mode == "exact":
        if paths.total_delay > inst.D:
            failures.append(f"delay {paths.total_delay} > D={inst.D}")
        if paths.total_cost > 2 * c_opt:
            failures.append(f"cost {paths.total_cost} > 2 * C_OPT={c_opt}")
        initial = phase1_solution(inst, opts.phase1_mode)
        failures += _audit_trace(inst, initial, solution.trace, solution.cost_estimate_used or 0)
    else:
        delay_cap = math.ceil((1 + opts.epsilon1) * inst.D)
        cost_cap = math.ceil((2 + opts.epsilon2) * c_opt)
        if paths.total_delay > delay_cap:
            failures.append(f"delay {paths.total_delay} > {delay_cap}")
        if paths.total_cost > cost_cap:
            failures.append(f"cost {paths.total_cost} > {cost_cap}")

    pinned_opts = opts.model_copy(update={"cycle_source": "hybrid", "mode": "exact"})
    initial = phase1_solution(inst, "mincost")
    pinned = run_cancellation(inst, initial, c_opt, pinned_opts)
    if pinned.failure == "no-cycle":
        failures.append(f"no bicameral cycle found with the estimate pinned to C_OPT={c_opt}")
    elif not pinned.success:
        failures.append(f"run pinned to C_OPT={c_opt} failed: {pinned.failure}")
    failures += _audit_trace(inst, initial, pinned.trace, c_opt)
    failures += _audit_monotone(pinned.trace, c_opt)

    lp_misses = 0
    if lp_archive is not None:
        for state, record in _replay(inst, initial, pinned.trace):
            ctx = SearchContext.for_paths(build_residual(inst, state), state, c_opt)
            if find_bicameral(ctx, "lp") is None:
                lp_misses += 1
                _archive_lp_miss(lp_archive, inst, state, c_opt, record.index)
    return failures, lp_misses


def _archive_lp_miss(directory: Path, inst: Instance, state: PathSet, c_hat: int, step: int) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    text = render_instance(inst)
    digest = hashlib.sha1(text.encode()).hexdigest()[:12]
    name = f"lp-miss-{digest}-{step}.json"
    payload = {"instance": text, "paths": state.id_paths(), "costEstimate": c_hat, "step": step}
    (directory / name).write_text(json.dumps(payload, indent=2, sort_keys=True))
    logger.warning(f"LP sweep missed a bicameral cycle, archived as {name}")


def run_case(
    case: BenchCase,
    opts: SolverOptions,
    audit: bool = True,
    lp_archive: Path | None = None,
) -> BenchRow:
    """Solve one case and compare it with the oracle."""
    inst = case.instance
    base = {"name": case.name, "n": inst.n, "m": inst.m, "D": inst.D}
    with solve_scope(case.name):
        try:
            oracle = brute_krsp(inst)
        except OracleSizeError as e:
            logger.warning(f"Skipping {case.name}: {e}")
            return BenchRow(**base, oracle_feasible=None, status="skipped", skipped=str(e))

        started = time.perf_counter()
        try:
            solution = solve(inst, opts)
        except KrspError as e:
            logger.error(f"{case.name}: {e}")
            return BenchRow(
                **base,
                oracle_feasible=oracle is not None,
                status="error",
                audit_failures=(str(e),),
                time_ms=(time.perf_counter() - started) * 1000,
            )
        elapsed = (time.perf_counter() - started) * 1000

        failures: list[str] = []
        if check_feasible(inst) != (oracle is not None):
            failures.append("feasibility check disagrees with the oracle")
        if (solution.status == "solved") != (oracle is not None):
            failures.append(f"solver says {solution.status}, oracle disagrees")
        if solution.status != "solved" or oracle is None or solution.paths is None:
            return BenchRow(
                **base,
                oracle_feasible=oracle is not None,
                status=solution.status,
                audit_failures=tuple(failures),
                time_ms=elapsed,
            )

        lp_misses = 0
        if audit:
            audit_failures, lp_misses = audit_run(
                inst, solution, oracle.c_opt, opts, lp_archive=lp_archive
            )
            failures += audit_failures
        paths = solution.paths
        estimate = solution.cost_estimate_used
        return BenchRow(
            **base,
            oracle_feasible=True,
            status="solved",
            c_opt=oracle.c_opt,
            cost=paths.total_cost,
            delay=paths.total_delay,
            cost_ratio=Fraction(paths.total_cost, oracle.c_opt) if oracle.c_opt else None,
            delay_slack=inst.D - paths.total_delay,
            iterations=solution.iterations,
            cost_estimate=estimate,
            estimate_within_growth=(
                estimate is not None and estimate <= settings.ladder_growth * oracle.c_opt
            ),
            lp_misses=lp_misses,
            audit_failures=tuple(failures),
            time_ms=elapsed,
        )


class BenchSummary(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rows: tuple[BenchRow, ...]

    @property
    def solved(self) -> list[BenchRow]:
        return [r for r in self.rows if r.status == "solved"]

    @property
    def ratios(self) -> list[Fraction]:
        return [r.cost_ratio for r in self.solved if r.cost_ratio is not None]

    @property
    def max_ratio(self) -> Fraction | None:
        return max(self.ratios, default=None)

    @property
    def mean_ratio(self) -> Fraction | None:
        ratios = self.ratios
        return sum(ratios, Fraction(0)) / len(ratios) if ratios else None

    @property
    def failures(self) -> list[tuple[str, str]]:
        return [(r.name, f) for r in self.rows for f in r.audit_failures]

    @property
    def estimate_hit_rate(self) -> Fraction | None:
        hits = [r.estimate_within_growth for r in self.solved if r.estimate_within_growth is not None]
        return Fraction(sum(hits), len(hits)) if hits else None

    def to_json(self, *, timings: bool = False) -> dict:
        rows = []
        for row in self.rows:
            data = to_jsonable(row)
            if not timings:
                data.pop("time_ms")
            rows.append(data)
        return {
            "rows": rows,
            "summary": to_jsonable(
                {
                    "instances": len(self.rows),
                    "solved": len(self.solved),
                    "infeasible": sum(r.status == "infeasible" for r in self.rows),
                    "skipped": sum(r.status == "skipped" for r in self.rows),
                    "maxCostRatio": self.max_ratio,
                    "meanCostRatio": self.mean_ratio,
                    "estimateHitRate": self.estimate_hit_rate,
                    "lpMisses": sum(r.lp_misses for r in self.rows),
                    "auditFailures": len(self.failures),
                }
            ),
        }

    def to_table(self) -> str:
        header = f"{'name':<14}{'status':<11}{'C_OPT':>6}{'cost':>6}{'ratio':>8}{'slack':>6}{'iters':>6}{'ms':>10}"
        lines = [header, "-" * len(header)]
        for r in self.rows:
            ratio = f"{float(r.cost_ratio):.3f}" if r.cost_ratio is not None else "-"
            lines.append(
                f"{r.name:<14}{r.status:<11}{_cell(r.c_opt):>6}{_cell(r.cost):>6}{ratio:>8}"
                f"{_cell(r.delay_slack):>6}{r.iterations:>6}{r.time_ms:>10.1f}"
            )
        lines.append("-" * len(header))
        max_ratio, mean_ratio = self.max_ratio, self.mean_ratio
        lines.append(
            f"solved {len(self.solved)}/{len(self.rows)}  "
            f"max ratio {float(max_ratio):.3f}  mean ratio {float(mean_ratio):.3f}"
            if max_ratio is not None and mean_ratio is not None
            else f"solved {len(self.solved)}/{len(self.rows)}"
        )
        for name, failure in self.failures:
            lines.append(f"FAIL {name}: {failure}")
        return "\n".join(lines)


def _cell(value: int | None) -> str:
    return "-" if value is None else str(value)


def run_bench(
    cases: Sequence[BenchCase],
    opts: SolverOptions,
    *,
    workers: int = 1,
    audit: bool = True,
    lp_archive: Path | None = None,
) -> BenchSummary:
    """Run every case, in a process pool when ``workers`` > 1.

    Rows come back ordered by case name whatever the completion order.
    """
    logger.info(f"Running {len(cases)} bench case(s) with {workers} worker(s)")
    if workers > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(
                pool.map(
                    run_case,
                    cases,
                    [opts] * len(cases),
                    [audit] * len(cases),
                    [lp_archive] * len(cases),
                )
            )
    else:
        rows = [run_case(case, opts, audit, lp_archive) for case in cases]
    summary = BenchSummary(rows=tuple(sorted(rows, key=lambda r: r.name)))
    if summary.failures:
        logger.warning(f"{len(summary.failures)} audit failure(s)")
    return summary
