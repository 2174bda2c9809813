"""Residual graphs, the symmetric-difference operator and flow decompositions."""

import logging
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from krsp_solver.exceptions import InvalidSolutionError, NotAFlowError
from krsp_solver.graph.core import Cycle, Edge, Instance, PathSet

logger = logging.getLogger(__name__)


def reverse_edge(e: Edge) -> Edge:
    """Reverse an edge and negate its weights.

    Reversing a reversed edge restores the forward edge exactly.
    """
    origin = None if e.origin is not None else e.id
    return Edge(id=e.id, tail=e.head, head=e.tail, cost=-e.cost, delay=-e.delay, origin=origin)


@dataclass(frozen=True)
class ResidualGraph:
    """The instance graph with the current solution's edges reversed.

    Every instance edge appears exactly once, keeping its id. ``forward_of``
    maps the id of each reversed edge to the forward edge it stands for.
    """

    base: Instance
    edges: tuple[Edge, ...]
    forward_of: Mapping[int, int]
    out_edges: Mapping[int, tuple[Edge, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        adjacency: dict[int, list[Edge]] = defaultdict(list)
        for e in self.edges:
            adjacency[e.tail].append(e)
        object.__setattr__(self, "out_edges", {v: tuple(es) for v, es in adjacency.items()})

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def key(self) -> tuple[Instance, tuple[int, ...]]:
        """Hashable identity of this residual state, used as a cache key."""
        return self.base, tuple(sorted(self.forward_of))


def build_residual(inst: Instance, sol: PathSet) -> ResidualGraph:
    """Reverse and negate every edge of ``sol`` in ``inst``.

    Raises:
        InvalidSolutionError: If ``sol`` uses an edge that is not in ``inst``
    """
    on_paths = set()
    for e in sol.edges:
        if e.id >= inst.m or inst.edges[e.id] != e:
            raise InvalidSolutionError(f"edge {e.id} is not an edge of the instance")
        on_paths.add(e.id)
    edges = tuple(reverse_edge(e) if e.id in on_paths else e for e in inst.edges)
    return ResidualGraph(base=inst, edges=edges, forward_of={i: i for i in sorted(on_paths)})


def symmetric_diff(a: Iterable[Edge], b: Iterable[Edge]) -> tuple[Edge, ...]:
    """Union of two edge sets minus cancelling forward/reversed pairs.

    A reversed edge cancels exactly the forward edge named by its origin, and
    only when the two come from different sides. Genuine antiparallel edges
    of the instance never cancel.
    """
    a, b = list(a), list(b)

    def split(edges: list[Edge]) -> tuple[set[int], set[int]]:
        forward = {e.id for e in edges if e.origin is None}
        reversed_ = {e.origin for e in edges if e.origin is not None}
        return forward, reversed_

    a_fwd, a_rev = split(a)
    b_fwd, b_rev = split(b)
    cancelled = (a_fwd & b_rev) | (b_fwd & a_rev)

    kept: dict[tuple[int, bool], Edge] = {}
    for e in a + b:
        base_id = e.origin if e.origin is not None else e.id
        if base_id not in cancelled:
            kept[(e.id, e.is_reversed)] = e
    return tuple(sorted(kept.values(), key=lambda e: (e.id, e.is_reversed)))


class _EdgePool:
    """Unused edges grouped by tail, handed out smallest id first."""

    def __init__(self, edges: Sequence[Edge]):
        self._by_tail: dict[int, list[Edge]] = defaultdict(list)
        for e in sorted(edges, key=lambda e: e.id, reverse=True):
            self._by_tail[e.tail].append(e)

    def take(self, vertex: int) -> Edge | None:
        stack = self._by_tail.get(vertex)
        return stack.pop() if stack else None

    def remaining(self) -> list[Edge]:
        return sorted((e for es in self._by_tail.values() for e in es), key=lambda e: e.id)


def _walk_cycles(pool: _EdgePool) -> list[Cycle]:
    """Split the balanced remainder of ``pool`` into vertex-simple cycles."""
    cycles = []
    while leftover := pool.remaining():
        start = leftover[0].tail
        walk: list[Edge] = []
        position = {start: 0}
        at = start
        while True:
            e = pool.take(at)
            if e is None:
                raise NotAFlowError(f"edge set is unbalanced at vertex {at}")
            walk.append(e)
            at = e.head
            if at in position:
                cut = position[at]
                cycles.append(Cycle.canonical(walk[cut:]))
                del walk[cut:]
                position = {start: 0} | {w.head: i + 1 for i, w in enumerate(walk)}
                if not walk:
                    break
            else:
                position[at] = len(walk)
    return sorted(cycles, key=lambda c: c.key[0])


def _degree_excess(edges: Iterable[Edge]) -> dict[int, int]:
    excess: dict[int, int] = defaultdict(int)
    for e in edges:
        excess[e.tail] += 1
        excess[e.head] -= 1
    return excess


def decompose_to_paths(edges: Iterable[Edge], inst: Instance) -> PathSet:
    """Extract k edge-disjoint s-t paths from a unit k-flow of ``inst``.

    Paths are walked depth-first from s along the smallest unused edge id.
    Cycles closed during a walk and edges left over after k paths are cut
    out and discarded; they lie in the instance graph, so their cost and
    delay are nonnegative and dropping them never raises the totals.

    Raises:
        InvalidSolutionError: If an edge is not an edge of ``inst``
        NotAFlowError: If an edge repeats or the degree conditions fail
    """
    edges = list(edges)
    ids = [e.id for e in edges]
    if len(ids) != len(set(ids)):
        raise NotAFlowError("edge set uses an edge more than once")
    for e in edges:
        if e.origin is not None or e.id >= inst.m or inst.edges[e.id] != e:
            raise InvalidSolutionError(f"edge {e.id} is not a forward edge of the instance")

    excess = _degree_excess(edges)
    for vertex, value in excess.items():
        wanted = inst.k if vertex == inst.s else -inst.k if vertex == inst.t else 0
        if value != wanted:
            raise NotAFlowError(f"vertex {vertex} has excess {value}, expected {wanted}")
    if excess.get(inst.s, 0) != inst.k:
        raise NotAFlowError(f"source excess {excess.get(inst.s, 0)}, expected {inst.k}")

    pool = _EdgePool(edges)
    paths: list[list[Edge]] = []
    discarded: list[Cycle] = []
    for _ in range(inst.k):
        walk: list[Edge] = []
        position = {inst.s: 0}
        at = inst.s
        while at != inst.t:
            e = pool.take(at)
            if e is None:
                raise NotAFlowError(f"path walk stuck at vertex {at}")
            walk.append(e)
            at = e.head
            if at in position:
                cut = position[at]
                discarded.append(Cycle.canonical(walk[cut:]))
                del walk[cut:]
                position = {inst.s: 0} | {w.head: i + 1 for i, w in enumerate(walk)}
            else:
                position[at] = len(walk)
        paths.append(walk)

    discarded.extend(_walk_cycles(pool))
    for cycle in sorted(discarded, key=lambda c: c.key[0]):
        logger.debug(
            f"Discarded leftover cycle {list(cycle.key)} (cost={cycle.cost}, delay={cycle.delay})"
        )
    return PathSet.from_paths(paths)


def diff_cycles(opt: PathSet, cur: PathSet, inst: Instance) -> tuple[Cycle, ...]:
    """Edge-disjoint residual cycles composing ``opt`` ⊕ reverse(``cur``).

    Every returned cycle is a simple cycle of the residual graph of ``cur``;
    their delays sum to opt.total_delay - cur.total_delay and their costs to
    opt.total_cost - cur.total_cost.
    """
    union = symmetric_diff(opt.edges, (reverse_edge(e) for e in cur.edges))
    return tuple(_walk_cycles(_EdgePool(union)))
