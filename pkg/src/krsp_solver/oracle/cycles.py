"""Exhaustive simple-cycle enumeration in residual multigraphs."""

import itertools
from collections import defaultdict
from collections.abc import Sequence
from typing import Protocol

import networkx as nx

from krsp_solver.config import settings
from krsp_solver.exceptions import OracleSizeError
from krsp_solver.graph.core import Cycle, Edge


class EdgeGraph(Protocol):
    """Anything with a vertex count and an edge list, such as a residual graph."""

    @property
    def n(self) -> int: ...

    @property
    def edges(self) -> Sequence[Edge]: ...


def enumerate_simple_cycles(g: EdgeGraph) -> list[Cycle]:
    """Every vertex-simple directed cycle of ``g`` exactly once.

    Johnson's algorithm (via networkx) runs on the simple digraph underneath;
    each vertex cycle is then expanded over all choices of parallel edges.
    Cycles are rotated to start at their smallest edge id and sorted by that
    rotation.

    Raises:
        OracleSizeError: If the graph has more vertices than the cap
    """
    if g.n > settings.cycle_enum_max_vertices:
        raise OracleSizeError("n", g.n, settings.cycle_enum_max_vertices)

    parallel: dict[tuple[int, int], list[Edge]] = defaultdict(list)
    for e in sorted(g.edges, key=lambda e: e.id):
        parallel[(e.tail, e.head)].append(e)

    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(g.n))
    digraph.add_edges_from(parallel)

    cycles = []
    for vertex_cycle in nx.simple_cycles(digraph):
        hops = zip(vertex_cycle, vertex_cycle[1:] + vertex_cycle[:1], strict=True)
        for choice in itertools.product(*(parallel[hop] for hop in hops)):
            cycles.append(Cycle.canonical(choice))
    return sorted(cycles, key=lambda c: c.key)
