"""Instance generation and inspection tools."""

from typing import Any

from mcp.server.fastmcp import Context
from pydantic import ValidationError

from krsp_solver.exceptions import KrspError, NoKFlowError
from krsp_solver.flow.phase1 import min_cost_k_disjoint, min_delay_k_disjoint
from krsp_solver.flow.residual import build_residual
from krsp_solver.graph.core import PathSet
from krsp_solver.graph.generator import gen_random_instance
from krsp_solver.graph.io import parse_instance, render_instance
from krsp_solver.oracle.brute import brute_krsp
from krsp_solver.oracle.cycles import enumerate_simple_cycles


async def generate_instance(
    ctx: Context,
    n: int,
    m: int,
    max_cost: int = 5,
    max_delay: int = 5,
    k: int = 2,
    seed: int = 1,
    delay_bound: int = 0,
) -> dict[str, Any]:
    """Generate a seeded random instance and return it in text form."""
    try:
        inst = gen_random_instance(n, m, max_cost, max_delay, k, seed).with_delay_bound(delay_bound)
    except (ValueError, ValidationError) as e:
        return {"error": str(e)}
    return {"instance_text": render_instance(inst), "n": inst.n, "m": inst.m, "k": inst.k, "D": inst.D}


async def check_feasibility(ctx: Context, instance_text: str) -> dict[str, Any]:
    """Decide whether k disjoint paths within the delay bound exist.

    Returns:
        feasible flag plus the min-cost and min-delay totals when k disjoint
        paths exist at all.
    """
    try:
        inst = parse_instance(instance_text)
    except KrspError as e:
        return {"error": str(e)}
    try:
        min_cost = min_cost_k_disjoint(inst)
        min_delay = min_delay_k_disjoint(inst)
    except NoKFlowError as e:
        return {"feasible": False, "reason": str(e)}
    return {
        "feasible": min_delay.total_delay <= inst.D,
        "lowerBoundCost": min_cost.total_cost,
        "minCostDelay": min_cost.total_delay,
        "minDelay": min_delay.total_delay,
        "delayBound": inst.D,
    }


async def brute_force_optimum(ctx: Context, instance_text: str) -> dict[str, Any]:
    """Exact optimum by exhaustive enumeration (small instances only)."""
    try:
        inst = parse_instance(instance_text)
        result = brute_krsp(inst)
    except KrspError as e:
        return {"error": str(e)}
    if result is None:
        return {"feasible": False}
    return {
        "feasible": True,
        "costOpt": result.c_opt,
        "paths": result.paths.id_paths(),
        "totalDelay": result.paths.total_delay,
    }


async def list_residual_cycles(
    ctx: Context,
    instance_text: str,
    path_edge_ids: list[list[int]],
) -> dict[str, Any]:
    """List every simple cycle of the residual graph of a path set.

    Args:
        ctx: MCP context
        instance_text: Instance in text form
        path_edge_ids: The k paths as edge-id sequences
    """
    try:
        inst = parse_instance(instance_text)
        paths = PathSet.from_paths([inst.edge(i) for i in path] for path in path_edge_ids)
        paths.validate_for(inst)
        cycles = enumerate_simple_cycles(build_residual(inst, paths))
    except (KrspError, ValidationError, ValueError, IndexError) as e:
        return {"error": str(e)}
    return {
        "count": len(cycles),
        "cycles": [
            {"edges": list(c.key), "reversed": sorted(e.id for e in c.edges if e.is_reversed),
             "cost": c.cost, "delay": c.delay}
            for c in cycles
        ],
    }
