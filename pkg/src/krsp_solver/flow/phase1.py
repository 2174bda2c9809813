"""Initial k disjoint paths and exact feasibility checks.

Min-sum disjoint paths are computed by successive shortest paths on the
unit-capacity residual network (Suurballe's construction generalised to k),
with Bellman-Ford handling the negated residual arcs. Weights are compared
lexicographically, so the min-cost routine also breaks cost ties by delay.
"""

import logging
from collections import defaultdict
from collections.abc import Callable
from fractions import Fraction

from krsp_solver.config import Phase1Mode
from krsp_solver.exceptions import InfeasibleInstanceError, NoKFlowError, SolverInvariantError
from krsp_solver.flow.residual import decompose_to_paths
from krsp_solver.graph.core import Edge, Instance, PathSet
from krsp_solver.lp.simplex import LpProblem, LpSolution, solve_lp

logger = logging.getLogger(__name__)

Weight = tuple[int, int]


def _add(a: Weight, b: Weight) -> Weight:
    return a[0] + b[0], a[1] + b[1]


def _neg(a: Weight) -> Weight:
    return -a[0], -a[1]


def _successive_shortest_paths(inst: Instance, weight: Callable[[Edge], Weight]) -> PathSet:
    """Min-weight k-flow by k Bellman-Ford augmentations.

    Raises:
        NoKFlowError: If fewer than k augmenting paths exist
    """
    in_flow: set[int] = set()
    for found in range(inst.k):
        dist: dict[int, Weight] = {inst.s: (0, 0)}
        pred: dict[int, Edge] = {}
        for _ in range(inst.n - 1):
            changed = False
            for e in inst.edges:
                if e.id in in_flow:
                    u, v, w = e.head, e.tail, _neg(weight(e))
                else:
                    u, v, w = e.tail, e.head, weight(e)
                if u not in dist:
                    continue
                candidate = _add(dist[u], w)
                if v not in dist or candidate < dist[v]:
                    dist[v] = candidate
                    pred[v] = e
                    changed = True
            if not changed:
                break
        if inst.t not in dist:
            raise NoKFlowError(inst.k, found)

        at = inst.t
        while at != inst.s:
            e = pred[at]
            if e.id in in_flow:
                in_flow.remove(e.id)
                at = e.head
            else:
                in_flow.add(e.id)
                at = e.tail

    return decompose_to_paths((inst.edges[i] for i in sorted(in_flow)), inst)


def min_cost_k_disjoint(inst: Instance) -> PathSet:
    """k edge-disjoint s-t paths of minimum total cost, ignoring delay.

    Raises:
        NoKFlowError: If fewer than k edge-disjoint s-t paths exist
    """
    return _successive_shortest_paths(inst, lambda e: (e.cost, e.delay))


def min_delay_k_disjoint(inst: Instance) -> PathSet:
    """k edge-disjoint s-t paths of minimum total delay, ignoring cost.

    Raises:
        NoKFlowError: If fewer than k edge-disjoint s-t paths exist
    """
    return _successive_shortest_paths(inst, lambda e: (e.delay, e.cost))


def check_feasible(inst: Instance) -> bool:
    """True iff some k edge-disjoint path set has total delay <= D."""
    try:
        return min_delay_k_disjoint(inst).total_delay <= inst.D
    except NoKFlowError:
        return False


def fractional_krsp_lp(inst: Instance) -> LpSolution:
    """Solve the fractional relaxation: unit capacities, flow value k, delay <= D."""
    lp = LpProblem(
        num_vars=inst.m,
        objective=[Fraction(e.cost) for e in inst.edges],
        upper=[Fraction(1)] * inst.m,
    )
    for v in range(inst.n):
        coeffs: dict[int, Fraction] = {}
        for e in inst.edges:
            if e.tail == v:
                coeffs[e.id] = coeffs.get(e.id, Fraction(0)) + 1
            if e.head == v:
                coeffs[e.id] = coeffs.get(e.id, Fraction(0)) - 1
        supply = inst.k if v == inst.s else -inst.k if v == inst.t else 0
        lp.add_equality(coeffs, supply)
    lp.add_inequality({e.id: Fraction(e.delay) for e in inst.edges}, inst.D)
    return solve_lp(lp)


def _fractional_cycle(inst: Instance, fractional: list[int]) -> tuple[list[int], list[int]]:
    """Split the fractional arcs, which form one undirected cycle, by traversal direction."""
    incident: dict[int, list[int]] = defaultdict(list)
    for i in fractional:
        incident[inst.edges[i].tail].append(i)
        incident[inst.edges[i].head].append(i)
    if any(len(ids) != 2 for ids in incident.values()):
        raise SolverInvariantError("fractional LP arcs do not form a single cycle")

    first = fractional[0]
    forward, backward = [first], []
    at, previous = inst.edges[first].head, first
    while True:
        a, b = incident[at]
        current = b if a == previous else a
        if current == first:
            break
        edge = inst.edges[current]
        if edge.tail == at:
            forward.append(current)
            at = edge.head
        else:
            backward.append(current)
            at = edge.tail
        previous = current
    if len(forward) + len(backward) != len(fractional):
        raise SolverInvariantError("fractional LP arcs do not form a single cycle")
    return forward, backward


def _round_fractional(inst: Instance, solution: LpSolution) -> PathSet:
    """Round a basic optimum to the heavier of the two integral flows it mixes.

    A basic solution is an integral flow plus theta times one cycle of
    fractional arcs, so it equals theta * F1 + (1 - theta) * F2 for integral
    k-flows F1 and F2. The one with weight at least 1/2 has cost at most
    twice the LP value and delay at most 2 D.
    """
    whole = [i for i, x in enumerate(solution.values) if x == 1]
    fractional = [i for i, x in enumerate(solution.values) if 0 < x < 1]
    chosen = whole
    if fractional:
        forward, backward = _fractional_cycle(inst, fractional)
        theta = solution.values[forward[0]]
        chosen = whole + (forward if theta >= Fraction(1, 2) else backward)
    return decompose_to_paths([inst.edges[i] for i in chosen], inst)


def phase1_solution(inst: Instance, mode: Phase1Mode = "mincost") -> PathSet:
    """Initial solution for the cancellation loop.

    Args:
        inst: A feasible instance
        mode: "mincost" (cost <= C_OPT, delay unconstrained) or "lp-round"
            (rounding of a basic optimum of the fractional LP; cost <= 2 C_OPT,
            delay <= 2 D)

    Raises:
        InfeasibleInstanceError: If the instance is infeasible
    """
    if not check_feasible(inst):
        raise InfeasibleInstanceError("no k disjoint paths meet the delay bound")
    if mode == "mincost":
        return min_cost_k_disjoint(inst)

    solution = fractional_krsp_lp(inst)
    if solution.status == "optimal":
        rounded = _round_fractional(inst, solution)
        logger.debug(
            f"LP rounding: fractional cost {solution.objective_value}, "
            f"rounded cost {rounded.total_cost}, delay {rounded.total_delay}"
        )
        return rounded
    logger.warning(f"fractional LP is {solution.status}, using min-cost paths")
    return min_cost_k_disjoint(inst)
