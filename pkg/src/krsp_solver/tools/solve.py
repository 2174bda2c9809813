"""Solver tools."""

import asyncio
import logging
import time
from typing import Any

from mcp.server.fastmcp import Context
from pydantic import ValidationError

from krsp_solver.context import AppContext
from krsp_solver.exceptions import KrspError
from krsp_solver.graph.io import parse_instance, render_instance
from krsp_solver.solver import Solution, SolverOptions, solve
from krsp_solver.utils.logging import solve_scope
from krsp_solver.utils.serialization import to_jsonable

logger = logging.getLogger(__name__)


def _app(ctx: Context) -> AppContext:
    return ctx.request_context.lifespan_context


def solution_payload(solution: Solution, wall_time_ms: float, *, with_trace: bool) -> dict[str, Any]:
    """JSON object shared by the CLI and the tool server."""
    paths = solution.paths
    return {
        "status": solution.status,
        "paths": paths.id_paths() if paths else [],
        "totalCost": paths.total_cost if paths else None,
        "totalDelay": paths.total_delay if paths else None,
        "costEstimateUsed": solution.cost_estimate_used,
        "iterations": to_jsonable(list(solution.trace)) if with_trace else len(solution.trace),
        "wallTimeMs": round(wall_time_ms, 3),
    }


async def solve_krsp(
    ctx: Context,
    instance_text: str,
    delay_bound: int | None = None,
    mode: str = "exact",
    eps1: str = "1/2",
    eps2: str = "1/2",
    phase1: str = "mincost",
    cycles: str = "hybrid",
    trace: bool = False,
) -> dict[str, Any]:
    """Solve a kRSP instance given in the text instance format.

    Args:
        ctx: MCP context
        instance_text: Header "n m k D [s t]" followed by m lines "u v cost delay"
        delay_bound: Overrides the D of the instance text
        mode: "exact" or "scaled"
        eps1: Delay slack for scaled mode, as "p/q" or a decimal
        eps2: Cost slack for scaled mode
        phase1: "mincost" or "lp-round"
        cycles: Bicameral cycle source, "lp", "enumerate" or "hybrid"
        trace: Include every iteration record instead of just the count

    Returns:
        status, paths (edge ids), totalCost, totalDelay, costEstimateUsed,
        iterations and wallTimeMs; or an error message.
    """
    app = _app(ctx)
    try:
        inst = parse_instance(instance_text)
        if delay_bound is not None:
            inst = inst.with_delay_bound(delay_bound)
        opts = SolverOptions(
            mode=mode,
            epsilon1=eps1,
            epsilon2=eps2,
            phase1_mode=phase1,
            cycle_source=cycles,
        )
    except (KrspError, ValidationError, ValueError) as e:
        return {"error": str(e)}

    key = (render_instance(inst), opts.model_dump_json(), trace)
    if key in app.cache:
        logger.debug("Returning cached solution")
        return app.cache[key]

    def run() -> dict[str, Any]:
        started = time.perf_counter()
        with solve_scope("tool"):
            solution = solve(inst, opts)
        return solution_payload(solution, (time.perf_counter() - started) * 1000, with_trace=trace)

    try:
        result = await asyncio.to_thread(run)
    except KrspError as e:
        logger.error(f"Solve failed: {e}")
        return {"error": str(e)}
    app.cache[key] = result
    return result
