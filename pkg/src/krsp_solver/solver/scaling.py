"""Rounding transform behind the (1 + eps1, 2 + eps2) mode."""

import logging
import math
from fractions import Fraction

from krsp_solver.graph.core import Edge, Instance

logger = logging.getLogger(__name__)


def scaling_granularity(inst: Instance) -> int:
    """Rounding granularity large enough for any k simple paths.

    k simple paths hold at most k(n-1) edges, each losing under one unit to
    the floor, so the rounding error stays within eps * D (and eps * C).
    """
    return max(inst.n, inst.k * (inst.n - 1))


def scale_instance(
    inst: Instance,
    eps1: Fraction,
    eps2: Fraction,
    c_hat: int,
    *,
    granularity: int | None = None,
) -> Instance:
    """Round delays and costs down to multiples of eps1*D/g and eps2*c_hat/g.

    d'(e) = floor(d(e) g / (eps1 D)), c'(e) = floor(c(e) g / (eps2 c_hat)),
    D' = floor(g / eps1), with g = ``granularity`` (default: n). Delay scaling
    is skipped when D = 0 and cost scaling when c_hat = 0.
    """
    if eps1 <= 0 or eps2 <= 0:
        raise ValueError("epsilons must be positive")
    g = granularity if granularity is not None else inst.n
    scale_delay = inst.D > 0
    scale_cost = c_hat > 0
    if not scale_delay:
        logger.debug("D = 0, delays are left unscaled")
    if not scale_cost:
        logger.debug("Cost estimate is 0, costs are left unscaled")

    def delay(d: int) -> int:
        return math.floor(Fraction(d * g) / (eps1 * inst.D)) if scale_delay else d

    def cost(c: int) -> int:
        return math.floor(Fraction(c * g) / (eps2 * c_hat)) if scale_cost else c

    edges = tuple(
        Edge(id=e.id, tail=e.tail, head=e.head, cost=cost(e.cost), delay=delay(e.delay))
        for e in inst.edges
    )
    D = math.floor(Fraction(g) / eps1) if scale_delay else inst.D
    return Instance(n=inst.n, edges=edges, s=inst.s, t=inst.t, k=inst.k, D=D)
