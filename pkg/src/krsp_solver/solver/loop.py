"""Cycle cancellation loop and the end-to-end solver."""

import logging
from dataclasses import dataclass, field
from typing import Any, Literal

from krsp_solver.bicameral.classify import SearchContext, classify_cycle
from krsp_solver.bicameral.search import find_bicameral
from krsp_solver.exceptions import SolverInvariantError
from krsp_solver.flow.phase1 import check_feasible, min_cost_k_disjoint, phase1_solution
from krsp_solver.flow.residual import build_residual, decompose_to_paths, symmetric_diff
from krsp_solver.graph.core import Instance, PathSet
from krsp_solver.graph.io import render_instance
from krsp_solver.solver.ladder import estimate_copt
from krsp_solver.solver.options import IterationRecord, Solution, SolverOptions
from krsp_solver.solver.scaling import scale_instance, scaling_granularity
from krsp_solver.utils.logging import current_solve_label, solve_scope
from krsp_solver.utils.serialization import to_jsonable

logger = logging.getLogger(__name__)

FailureReason = Literal["no-cycle", "repeat", "iteration-cap", "over-cost"]


@dataclass
class CancellationRun:
    """Outcome of the cancellation loop at one cost estimate."""

    c_hat: int
    paths: PathSet
    trace: list[IterationRecord] = field(default_factory=list)
    failure: FailureReason | None = None

    @property
    def success(self) -> bool:
        return self.failure is None


def iteration_cap(inst: Instance) -> int:
    """Generous bound D * sum(c) * sum(d) on the number of cancellation steps."""
    return max(1, inst.D) * max(1, inst.total_cost) * max(1, inst.total_delay)


def run_cancellation(
    inst: Instance,
    initial: PathSet,
    c_hat: int,
    opts: SolverOptions | None = None,
) -> CancellationRun:
    """Cancel bicameral cycles until the delay bound holds.

    The run fails, rather than raising, when no bicameral cycle is found, a
    path set repeats, the iteration cap is hit, or the final cost exceeds
    2 * c_hat.
    """
    opts = opts or SolverOptions()
    cap = opts.max_iterations or iteration_cap(inst)
    bmax = opts.bmax or max(c_hat, 1)
    run = CancellationRun(c_hat=c_hat, paths=initial)
    seen = {initial.edge_ids}

    while run.paths.total_delay > inst.D:
        if len(run.trace) >= cap:
            logger.debug(f"Iteration cap {cap} reached at estimate {c_hat}")
            run.failure = "iteration-cap"
            return run
        current = run.paths
        residual = build_residual(inst, current)
        ctx = SearchContext.for_paths(residual, current, c_hat, bmax)
        cycle = find_bicameral(ctx, opts.cycle_source, binary_search_b=opts.binary_search_b)
        if cycle is None:
            logger.debug(f"No bicameral cycle at estimate {c_hat} after {len(run.trace)} steps")
            run.failure = "no-cycle"
            return run

        flow = symmetric_diff(current.edges, cycle.edges)
        following = decompose_to_paths(flow, inst)
        try:
            following.validate_for(inst)
        except ValueError as e:
            raise SolverInvariantError(
                f"cancelling {list(cycle.key)} broke the path set: {e}",
                _state_dump(inst, c_hat, current, run.trace, "invalid-paths"),
            ) from e

        record = IterationRecord(
            index=len(run.trace),
            D=current.total_delay,
            C=current.total_cost,
            delta_d=ctx.delta_d,
            delta_c=ctx.delta_c,
            r=ctx.ratio,
            cycle=cycle.key,
            cycle_cost=cycle.cost,
            cycle_delay=cycle.delay,
            kind=classify_cycle(cycle, ctx),
            dropped_cost=sum(e.cost for e in flow) - following.total_cost,
            dropped_delay=sum(e.delay for e in flow) - following.total_delay,
            path_edge_ids=tuple(tuple(p) for p in following.id_paths()),
        )
        run.trace.append(record)
        if opts.trace:
            logger.info(f"Iteration {to_jsonable(record)}")

        run.paths = following
        if following.edge_ids in seen:
            logger.debug(f"Path set repeated at estimate {c_hat}")
            run.failure = "repeat"
            return run
        seen.add(following.edge_ids)

    if run.paths.total_cost > 2 * c_hat:
        run.failure = "over-cost"
    return run


def _state_dump(
    inst: Instance,
    c_hat: int,
    paths: PathSet,
    trace: list[IterationRecord],
    reason: str,
) -> dict[str, Any]:
    return {
        "instance": render_instance(inst),
        "costEstimate": c_hat,
        "paths": paths.id_paths(),
        "reason": reason,
        "trace": to_jsonable(list(trace)),
    }


def _run_rung(inst: Instance, initial: PathSet, c_hat: int, opts: SolverOptions) -> CancellationRun:
    with solve_scope(f"{current_solve_label()}@{c_hat}"):
        run = run_cancellation(inst, initial, c_hat, opts)
    logger.info(
        f"Estimate {c_hat}: {'accepted' if run.success else f'rejected ({run.failure})'}, "
        f"cost={run.paths.total_cost} delay={run.paths.total_delay} steps={len(run.trace)}"
    )
    return run


def _refine(
    inst: Instance,
    initial: PathSet,
    failed: int,
    accepted: CancellationRun,
    opts: SolverOptions,
    tried: list[int],
) -> CancellationRun:
    """Bisect the estimates strictly between ``failed`` and the accepted rung.

    Returns the cheapest accepted run seen.
    """
    best = accepted
    lo, hi = failed + 1, accepted.c_hat
    while lo < hi:
        mid = (lo + hi) // 2
        tried.append(mid)
        run = _run_rung(inst, initial, mid, opts)
        if run.success:
            hi = mid
            if (run.paths.total_cost, run.c_hat) < (best.paths.total_cost, best.c_hat):
                best = run
        else:
            lo = mid + 1
    return best


def _solve_exact(inst: Instance, opts: SolverOptions) -> Solution:
    initial = phase1_solution(inst, opts.phase1_mode)
    if initial.total_delay <= inst.D:
        logger.info(f"Phase-1 paths already meet D={inst.D}")
        return Solution(
            status="solved",
            paths=initial,
            cost_estimate_used=max(initial.total_cost, min_cost_k_disjoint(inst).total_cost),
        )

    rungs = estimate_copt(inst, start=initial.total_cost)
    logger.info(f"Estimate ladder: {rungs}")
    tried: list[int] = []
    previous: int | None = None
    for c_hat in rungs:
        tried.append(c_hat)
        run = _run_rung(inst, initial, c_hat, opts)
        if run.success:
            if opts.refine_estimate and previous is not None:
                run = _refine(inst, initial, previous, run, opts, tried)
            logger.info(f"Accepted estimate {run.c_hat} with cost {run.paths.total_cost}")
            return Solution(
                status="solved",
                paths=run.paths,
                trace=tuple(run.trace),
                cost_estimate_used=run.c_hat,
                rungs_tried=tuple(tried),
            )
        previous = c_hat

    raise SolverInvariantError(
        f"no estimate up to {rungs[-1]} reached the delay bound on a feasible instance",
        _state_dump(inst, run.c_hat, run.paths, run.trace, run.failure or "unknown"),
    )


def _solve_scaled(inst: Instance, opts: SolverOptions) -> Solution:
    lower = min_cost_k_disjoint(inst).total_cost
    scaled = scale_instance(
        inst, opts.epsilon1, opts.epsilon2, lower, granularity=scaling_granularity(inst)
    )
    logger.info(f"Scaled instance: D'={scaled.D}, cost scale from LB={lower}")
    solution = _solve_exact(scaled, opts)
    assert solution.paths is not None
    paths = PathSet.from_paths(
        [inst.edges[e.id] for e in path] for path in solution.paths.paths
    )
    return solution.model_copy(update={"paths": paths})


def solve(inst: Instance, opts: SolverOptions | None = None) -> Solution:
    """Solve a kRSP instance.

    Exact mode returns total delay <= D and, with an exhaustive cycle
    source, total cost <= 2 * C_OPT. Scaled mode rounds the instance first
    and returns delay <= (1 + eps1) D and cost <= (2 + eps2) C_OPT.

    Raises:
        SolverInvariantError: If even the largest estimate fails on a
            feasible instance
    """
    opts = opts or SolverOptions()
    if not check_feasible(inst):
        logger.info("Instance is infeasible")
        return Solution(status="infeasible")
    if opts.mode == "scaled":
        return _solve_scaled(inst, opts)
    return _solve_exact(inst, opts)
