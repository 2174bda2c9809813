"""Geometric ladder of C_OPT estimates."""

import math
from fractions import Fraction

from krsp_solver.config import settings
from krsp_solver.flow.phase1 import min_cost_k_disjoint
from krsp_solver.graph.core import Instance


def estimate_copt(
    inst: Instance,
    *,
    start: int | None = None,
    growth: Fraction | None = None,
) -> list[int]:
    """Ascending C_OPT estimates from LB up to UB = sum of all edge costs.

    LB is the cost of the min-cost k disjoint paths, a lower bound on C_OPT.
    Each rung is max(ceil(growth * previous), previous + 1) so a zero LB
    still climbs; the last rung is always UB.

    Args:
        inst: A feasible instance
        start: First rung, raised to at least LB
        growth: Ratio between rungs (default: settings.ladder_growth)
    """
    growth = growth if growth is not None else settings.ladder_growth
    lower = min_cost_k_disjoint(inst).total_cost
    upper = inst.total_cost
    current = max(lower, start or 0)
    rungs = [current]
    while current < upper:
        current = min(upper, max(math.ceil(growth * current), current + 1))
        rungs.append(current)
    return rungs
