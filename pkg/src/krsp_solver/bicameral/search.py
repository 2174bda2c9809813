"""Bicameral cycle search: LP sweep over auxiliary graphs, exhaustive enumeration, or both."""

import logging
import threading
from collections.abc import Iterable, Iterator
from fractions import Fraction

from cachetools import LRUCache, cached
from cachetools.keys import hashkey

from krsp_solver.bicameral.aux import Sign, build_aux, lift_cycle, make_cycle_lp
from krsp_solver.bicameral.classify import CycleClass, SearchContext, classify_cycle
from krsp_solver.config import CycleSource, settings
from krsp_solver.exceptions import SolverInvariantError
from krsp_solver.flow.residual import ResidualGraph
from krsp_solver.graph.core import Cycle
from krsp_solver.lp.circulation import decompose_circulation
from krsp_solver.lp.simplex import solve_lp
from krsp_solver.oracle.cycles import enumerate_simple_cycles

logger = logging.getLogger(__name__)

_aux_cache: LRUCache = LRUCache(maxsize=settings.lp_cache_size)
_aux_lock = threading.RLock()


def _aux_key(residual: ResidualGraph, v: int, B: int, sign: Sign, budget: int) -> tuple:
    return hashkey(residual.key, v, B, sign, budget if sign == "+" else None)


@cached(cache=_aux_cache, key=_aux_key, lock=_aux_lock)
def solve_aux(residual: ResidualGraph, v: int, B: int, sign: Sign, budget: int) -> tuple[Cycle, ...]:
    """Solve the circulation LP on H_v^sign(B) and lift every support cycle."""
    aux = build_aux(residual, v, B, sign)
    solution = solve_lp(make_cycle_lp(aux, budget))
    if solution.status != "optimal":
        return ()
    arcs = [(e.tail, e.head) for e in aux.edges]
    lifted: dict[tuple[int, ...], Cycle] = {}
    for circulation in decompose_circulation(solution.values, arcs):
        for cycle in lift_cycle(aux, [aux.edges[i] for i in circulation.arcs]):
            lifted.setdefault(cycle.key, cycle)
    return tuple(lifted.values())


def clear_aux_cache() -> None:
    with _aux_lock:
        _aux_cache.clear()


def _anchors(residual: ResidualGraph) -> list[int]:
    """Vertices with both an incoming and an outgoing residual edge."""
    heads = {e.head for e in residual.edges}
    return sorted(v for v in residual.out_edges if v in heads)


def _sweep_level(ctx: SearchContext, B: int) -> list[Cycle]:
    found = []
    for v in _anchors(ctx.residual):
        for sign in ("+", "-"):
            found.extend(solve_aux(ctx.residual, v, B, sign, ctx.delta_d))
    return found


def _lp_candidates(ctx: SearchContext, binary_search_b: bool) -> Iterator[Cycle]:
    if not binary_search_b:
        for B in range(1, ctx.bmax + 1):
            yield from _sweep_level(ctx, B)
        return

    # Bisect for the smallest B with a bicameral candidate, yielding every swept level.
    top = _sweep_level(ctx, ctx.bmax)
    yield from top
    if not any(classify_cycle(c, ctx).is_bicameral for c in top):
        return
    lo, hi = 1, ctx.bmax
    while lo < hi:
        mid = (lo + hi) // 2
        level = _sweep_level(ctx, mid)
        yield from level
        if any(classify_cycle(c, ctx).is_bicameral for c in level):
            hi = mid
        else:
            lo = mid + 1


def _rank_key(ratio: Fraction, cycle: Cycle) -> tuple[Fraction, int, tuple[int, ...]]:
    return ratio, abs(cycle.cost), cycle.key


def select_bicameral(candidates: Iterable[Cycle], ctx: SearchContext) -> Cycle | None:
    """Pick a cycle from ``candidates``.

    The first type-0 cycle wins outright. Otherwise O1 is the type-1 cycle
    with the smallest d/c and O2 the type-2 cycle with the smallest |d/c|;
    O1 is returned if |d(O1)/c(O1)| <= |d(O2)/c(O2)|, else O2. Ties break
    toward smaller |c|, then the canonical edge-id sequence.
    """
    best1: tuple[tuple[Fraction, int, tuple[int, ...]], Cycle] | None = None
    best2: tuple[tuple[Fraction, int, tuple[int, ...]], Cycle] | None = None
    seen: set[tuple[int, ...]] = set()
    for cycle in candidates:
        if cycle.key in seen:
            continue
        seen.add(cycle.key)
        kind = classify_cycle(cycle, ctx)
        if kind is CycleClass.TYPE0:
            return cycle
        if kind is CycleClass.TYPE1:
            rank = _rank_key(Fraction(cycle.delay, cycle.cost), cycle)
            if best1 is None or rank < best1[0]:
                best1 = (rank, cycle)
        elif kind is CycleClass.TYPE2:
            rank = _rank_key(abs(Fraction(cycle.delay, cycle.cost)), cycle)
            if best2 is None or rank < best2[0]:
                best2 = (rank, cycle)

    if best1 is None:
        return best2[1] if best2 else None
    if best2 is None:
        return best1[1]
    return best1[1] if abs(best1[0][0]) <= best2[0][0] else best2[1]


def find_bicameral(
    ctx: SearchContext,
    source: CycleSource = "hybrid",
    *,
    binary_search_b: bool = False,
) -> Cycle | None:
    """Find a bicameral cycle in ``ctx.residual``, or None.

    Args:
        ctx: Residual graph and slack values
        source: "lp" sweeps B = 1..bmax over every anchor and both signs,
            "enumerate" scans every simple cycle, "hybrid" runs the LP sweep
            and falls back to enumeration when it finds nothing
        binary_search_b: Sweep only the B values visited by a bisection for
            the smallest budget that yields a bicameral candidate

    Raises:
        SolverInvariantError: If the chosen cycle does not classify as bicameral
    """
    cycle = None
    if source in ("lp", "hybrid"):
        cycle = select_bicameral(_lp_candidates(ctx, binary_search_b), ctx)
        if cycle is None and source == "hybrid":
            if ctx.residual.n > settings.cycle_enum_max_vertices:
                logger.debug(f"LP sweep found nothing and n={ctx.residual.n} is too large to enumerate")
                return None
            logger.debug("LP sweep found no bicameral cycle, falling back to enumeration")
    if cycle is None and source in ("enumerate", "hybrid"):
        cycle = select_bicameral(enumerate_simple_cycles(ctx.residual), ctx)

    if cycle is not None:
        kind = classify_cycle(cycle, ctx)
        if not kind.is_bicameral:
            raise SolverInvariantError(f"selected cycle {list(cycle.key)} is not bicameral")
        logger.debug(
            f"Bicameral {kind} cycle {list(cycle.key)} cost={cycle.cost} delay={cycle.delay}"
        )
    return cycle
