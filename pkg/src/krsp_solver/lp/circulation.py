"""Decomposition of nonnegative circulations into weighted simple cycles."""

from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from krsp_solver.exceptions import NotACirculationError


@dataclass(frozen=True)
class CirculationCycle:
    """A vertex-simple cycle given as arc indices, carrying ``weight`` units of flow."""

    arcs: tuple[int, ...]
    weight: Fraction


def decompose_circulation(
    values: Sequence[Fraction],
    arcs: Sequence[tuple[int, int]],
) -> list[CirculationCycle]:
    """Split a circulation into at most ``len(arcs)`` weighted simple cycles.

    Args:
        values: Flow value per arc, all nonnegative
        arcs: (tail, head) per arc, aligned with ``values``

    Returns:
        Cycles whose weighted incidence vectors sum to ``values`` exactly

    Raises:
        NotACirculationError: On negative values or unbalanced vertices
    """
    if len(values) != len(arcs):
        raise NotACirculationError("values and arcs differ in length")
    balance: dict[int, Fraction] = defaultdict(Fraction)
    for value, (tail, head) in zip(values, arcs, strict=True):
        if value < 0:
            raise NotACirculationError(f"negative flow {value} on arc {tail}->{head}")
        balance[tail] -= value
        balance[head] += value
    unbalanced = sorted(v for v, b in balance.items() if b != 0)
    if unbalanced:
        raise NotACirculationError(f"conservation violated at vertices {unbalanced}")

    remaining = [Fraction(v) for v in values]
    out_arcs: dict[int, list[int]] = defaultdict(list)
    for index, (tail, _) in enumerate(arcs):
        out_arcs[tail].append(index)

    cycles: list[CirculationCycle] = []
    while True:
        start = next((i for i, v in enumerate(remaining) if v > 0), None)
        if start is None:
            return cycles
        at = arcs[start][0]
        walk: list[int] = []
        position = {at: 0}
        while True:
            arc = next(i for i in out_arcs[at] if remaining[i] > 0)
            walk.append(arc)
            at = arcs[arc][1]
            if at in position:
                cycle = tuple(walk[position[at]:])
                weight = min(remaining[i] for i in cycle)
                for i in cycle:
                    remaining[i] -= weight
                cycles.append(CirculationCycle(arcs=cycle, weight=weight))
                break
            position[at] = len(walk)
