"""Brute-force kRSP optima by enumerating unit k-flows edge subset by edge subset.

Shares nothing with the solver beyond the graph-core types.
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from krsp_solver.config import settings
from krsp_solver.exceptions import OracleSizeError
from krsp_solver.graph.core import Edge, Instance, PathSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BruteForceResult:
    c_opt: int
    paths: PathSet


def _check_caps(inst: Instance) -> None:
    if inst.n > settings.oracle_max_vertices:
        raise OracleSizeError("n", inst.n, settings.oracle_max_vertices)
    if inst.m > settings.oracle_max_edges:
        raise OracleSizeError("m", inst.m, settings.oracle_max_edges)


def _degree_valid_subsets(inst: Instance, order: Sequence[int]) -> Iterator[list[Edge]]:
    """Every edge subset with out-in degree k at s, -k at t and 0 elsewhere."""
    edges = [inst.edges[i] for i in order]
    target = [0] * inst.n
    target[inst.s] = inst.k
    target[inst.t] = -inst.k

    # incident[i][v]: edges from position i on that touch v
    incident = [[0] * inst.n for _ in range(len(edges) + 1)]
    for i in range(len(edges) - 1, -1, -1):
        incident[i] = list(incident[i + 1])
        incident[i][edges[i].tail] += 1
        incident[i][edges[i].head] += 1

    excess = [0] * inst.n
    chosen: list[Edge] = []

    def search(i: int) -> Iterator[list[Edge]]:
        if any(abs(target[v] - excess[v]) > incident[i][v] for v in range(inst.n)):
            return
        if i == len(edges):
            yield list(chosen)
            return
        e = edges[i]
        excess[e.tail] += 1
        excess[e.head] -= 1
        chosen.append(e)
        yield from search(i + 1)
        chosen.pop()
        excess[e.tail] -= 1
        excess[e.head] += 1
        yield from search(i + 1)

    yield from search(0)


def _as_simple_paths(inst: Instance, subset: list[Edge]) -> list[list[Edge]] | None:
    """Split the subset into k simple s-t paths using every edge; None if no split exists.

    Backtracks over out-edge choices, so a subset is accepted whenever some
    walk order splits it, not only the smallest-id one.
    """
    out: dict[int, list[Edge]] = {}
    for e in sorted(subset, key=lambda e: e.id):
        out.setdefault(e.tail, []).append(e)
    used: set[int] = set()
    paths: list[list[Edge]] = []

    def extend(path: list[Edge], seen: set[int], at: int) -> bool:
        if at == inst.t:
            paths.append(list(path))
            if len(paths) == inst.k:
                if len(used) == len(subset):
                    return True
            elif extend([], {inst.s}, inst.s):
                return True
            paths.pop()
            return False
        for e in out.get(at, []):
            if e.id in used or e.head in seen:
                continue
            used.add(e.id)
            seen.add(e.head)
            path.append(e)
            if extend(path, seen, e.head):
                return True
            path.pop()
            seen.discard(e.head)
            used.discard(e.id)
        return False

    return paths if extend([], {inst.s}, inst.s) else None


def _path_sets(inst: Instance, order: Sequence[int] | None) -> Iterator[tuple[int, int, list[list[Edge]]]]:
    _check_caps(inst)
    order = range(inst.m) if order is None else order
    for subset in _degree_valid_subsets(inst, order):
        paths = _as_simple_paths(inst, subset)
        if paths is not None:
            yield sum(e.cost for e in subset), sum(e.delay for e in subset), paths


def brute_krsp(inst: Instance, order: Sequence[int] | None = None) -> BruteForceResult | None:
    """Exact kRSP optimum, or None when the instance is infeasible.

    Args:
        inst: Instance within the oracle caps
        order: Edge-id order for the enumeration (default: id order); the
            result does not depend on it

    Raises:
        OracleSizeError: If n or m exceeds the caps
    """
    best: tuple[int, int, tuple[int, ...]] | None = None
    best_paths: list[list[Edge]] | None = None
    for cost, delay, paths in _path_sets(inst, order):
        if delay > inst.D:
            continue
        ids = tuple(sorted(e.id for p in paths for e in p))
        rank = (cost, delay, ids)
        if best is None or rank < best:
            best, best_paths = rank, paths
    if best is None or best_paths is None:
        return None
    return BruteForceResult(c_opt=best[0], paths=PathSet.from_paths(best_paths))


def brute_delay_range(inst: Instance) -> tuple[int, int] | None:
    """Smallest and largest total delay over all k simple disjoint path sets."""
    delays = [delay for _, delay, _ in _path_sets(inst, None)]
    if not delays:
        return None
    return min(delays), max(delays)
