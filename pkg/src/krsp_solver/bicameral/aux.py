"""Layered auxiliary graphs H_v^+(B) and H_v^-(B) and the circulation LP over them.

Vertex (u, level) of the residual graph is numbered ``u * (B + 1) + level``.
A residual edge of cost c shifts the level by c; wrap edges at the anchor
close the level dimension, back to level 0 in H^+ and up to level B in H^-.
Lifting keeps only residual cycles whose cost stays in [-B, B].
"""

from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from krsp_solver.flow.residual import ResidualGraph
from krsp_solver.graph.core import Cycle, Edge
from krsp_solver.lp.simplex import LpProblem

Sign = Literal["+", "-"]


@dataclass(frozen=True)
class AuxEdge:
    tail: int
    head: int
    delay: int
    cost: int
    residual: Edge | None  # None marks a wrap edge

    @property
    def is_wrap(self) -> bool:
        return self.residual is None


@dataclass(frozen=True)
class AuxGraph:
    sign: Sign
    anchor: int
    budget: int
    n: int
    edges: tuple[AuxEdge, ...]

    @property
    def levels(self) -> int:
        return self.budget + 1

    @property
    def num_vertices(self) -> int:
        return self.n * self.levels

    @property
    def wrap_edges(self) -> tuple[AuxEdge, ...]:
        return tuple(e for e in self.edges if e.is_wrap)

    def vertex(self, u: int, level: int) -> int:
        return u * self.levels + level

    def split(self, vertex: int) -> tuple[int, int]:
        return divmod(vertex, self.levels)


def build_aux(residual: ResidualGraph, v: int, B: int, sign: Sign) -> AuxGraph:
    """Build H_v^sign(B).

    Each residual edge e with |c(e)| <= B gets B - |c(e)| + 1 level-shift
    copies. Wrap edges that would be self-loops are left out.
    """
    if B < 1:
        raise ValueError(f"budget must be at least 1, got {B}")
    levels = B + 1
    edges: list[AuxEdge] = []
    for e in residual.edges:
        if abs(e.cost) > B:
            continue
        for i in range(max(0, -e.cost), B - max(0, e.cost) + 1):
            edges.append(
                AuxEdge(
                    tail=e.tail * levels + i,
                    head=e.head * levels + i + e.cost,
                    delay=e.delay,
                    cost=e.cost,
                    residual=e,
                )
            )
    target = 0 if sign == "+" else B
    for i in range(levels):
        if i != target:
            edges.append(AuxEdge(v * levels + i, v * levels + target, 0, 0, None))
    return AuxGraph(sign=sign, anchor=v, budget=B, n=residual.n, edges=tuple(edges))


def make_cycle_lp(aux: AuxGraph, delta_d: int) -> LpProblem:
    """Min-cost unit-capacity circulation on ``aux``.

    H^+ graphs carry the delay budget row ``sum d x <= min(delta_d, -1)``,
    which excludes the zero circulation. H^- graphs carry no budget row and
    expose negative-cost circulations through the objective alone.
    """
    lp = LpProblem(
        num_vars=len(aux.edges),
        objective=[Fraction(e.cost) for e in aux.edges],
        upper=[Fraction(1)] * len(aux.edges),
    )
    rows: dict[int, dict[int, Fraction]] = defaultdict(dict)
    for j, e in enumerate(aux.edges):
        rows[e.tail][j] = Fraction(1)
        rows[e.head][j] = Fraction(-1)
    for vertex in sorted(rows):
        lp.add_equality(rows[vertex], 0)
    if aux.sign == "+":
        lp.add_inequality(
            {j: Fraction(e.delay) for j, e in enumerate(aux.edges) if e.delay},
            min(delta_d, -1),
        )
    return lp


def lift_cycle(aux: AuxGraph, aux_cycle: Sequence[AuxEdge]) -> list[Cycle]:
    """Map an auxiliary cycle back to simple residual cycles.

    Wrap edges are dropped, the rest map to their residual edges, and the
    resulting closed walk is split into vertex-simple cycles (deduplicated).
    A split cycle can exceed the budget when the walk revisits a vertex at
    another level; such cycles are dropped.
    """
    sequence = list(aux_cycle)
    wraps = [i for i, e in enumerate(sequence) if e.is_wrap]
    if wraps:
        cut = wraps[0] + 1
        sequence = sequence[cut:] + sequence[:cut]
    walk = [e.residual for e in sequence if e.residual is not None]
    if not walk:
        return []

    start = walk[0].tail
    stack: list[Edge] = []
    position = {start: 0}
    lifted: dict[tuple[int, ...], Cycle] = {}
    for e in walk:
        stack.append(e)
        if e.head in position:
            cut = position[e.head]
            cycle = Cycle.canonical(stack[cut:])
            if abs(cycle.cost) <= aux.budget:
                lifted.setdefault(cycle.key, cycle)
            del stack[cut:]
            position = {start: 0} | {w.head: i + 1 for i, w in enumerate(stack)}
        else:
            position[e.head] = len(stack)
    return list(lifted.values())
