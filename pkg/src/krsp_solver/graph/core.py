"""Directed multigraph types shared by every solver module and the oracle."""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Edge(BaseModel):
    """A directed edge with integral cost and delay.

    Instance edges have nonnegative weights and no origin. Residual graphs
    reuse this type for reversed edges, which carry negated weights and the
    id of the forward edge they reverse in ``origin``.
    """

    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=0)
    tail: int = Field(ge=0)
    head: int = Field(ge=0)
    cost: int
    delay: int
    origin: int | None = None

    @property
    def is_reversed(self) -> bool:
        """True for residual edges standing in for a reversed forward edge."""
        return self.origin is not None


class Instance(BaseModel):
    """A kRSP instance: digraph, terminals, path count and delay bound."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2)
    edges: tuple[Edge, ...] = ()
    s: int = 0
    t: int
    k: int = Field(ge=1)
    D: int = Field(ge=0)

    @model_validator(mode="after")
    def check_invariants(self) -> "Instance":
        """Terminals distinct and in range, edges dense, forward and nonnegative."""
        if self.s == self.t:
            raise ValueError("s and t must be distinct")
        for terminal in (self.s, self.t):
            if not 0 <= terminal < self.n:
                raise ValueError(f"terminal {terminal} out of range for n={self.n}")
        for index, edge in enumerate(self.edges):
            if edge.id != index:
                raise ValueError(f"edge ids must be dense and ordered, got {edge.id} at {index}")
            if edge.origin is not None:
                raise ValueError(f"edge {edge.id} is a reversed edge")
            if edge.cost < 0:
                raise ValueError(f"edge {edge.id} has negative cost")
            if edge.delay < 0:
                raise ValueError(f"edge {edge.id} has negative delay")
            if edge.tail >= self.n or edge.head >= self.n:
                raise ValueError(f"edge {edge.id} has a dangling vertex id")
            if edge.tail == edge.head:
                raise ValueError(f"edge {edge.id} is a self-loop")
        return self

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def total_cost(self) -> int:
        """Sum of all edge costs (the top of the C_OPT estimate ladder)."""
        return sum(e.cost for e in self.edges)

    @property
    def total_delay(self) -> int:
        return sum(e.delay for e in self.edges)

    def edge(self, edge_id: int) -> Edge:
        return self.edges[edge_id]

    def with_delay_bound(self, D: int) -> "Instance":
        """Copy of this instance with a different delay bound."""
        return Instance(n=self.n, edges=self.edges, s=self.s, t=self.t, k=self.k, D=D)


class PathSet(BaseModel):
    """k mutually edge-disjoint s-t paths with cached totals.

    Build with :meth:`from_paths`; the validator re-checks the totals and
    edge-disjointness. Chaining from s to t is checked by :meth:`validate_for`
    since the model itself does not know the terminals.
    """

    model_config = ConfigDict(frozen=True)

    paths: tuple[tuple[Edge, ...], ...]
    total_cost: int
    total_delay: int

    @classmethod
    def from_paths(cls, paths: Iterable[Sequence[Edge]]) -> "PathSet":
        frozen = tuple(tuple(p) for p in paths)
        return cls(
            paths=frozen,
            total_cost=sum(e.cost for p in frozen for e in p),
            total_delay=sum(e.delay for p in frozen for e in p),
        )

    @model_validator(mode="after")
    def check_invariants(self) -> "PathSet":
        """Paths are edge-disjoint and the cached totals match."""
        ids = [e.id for p in self.paths for e in p]
        if len(ids) != len(set(ids)):
            raise ValueError("paths are not edge-disjoint")
        if self.total_cost != sum(e.cost for p in self.paths for e in p):
            raise ValueError("total_cost does not match the paths")
        if self.total_delay != sum(e.delay for p in self.paths for e in p):
            raise ValueError("total_delay does not match the paths")
        return self

    @property
    def k(self) -> int:
        return len(self.paths)

    @property
    def edges(self) -> tuple[Edge, ...]:
        """All edges of all paths, ordered by id."""
        return tuple(sorted((e for p in self.paths for e in p), key=lambda e: e.id))

    @property
    def edge_ids(self) -> frozenset[int]:
        return frozenset(e.id for p in self.paths for e in p)

    def id_paths(self) -> list[list[int]]:
        """Paths as edge-id sequences, the wire format used by the CLI."""
        return [[e.id for e in p] for p in self.paths]

    def validate_for(self, inst: Instance) -> None:
        """Raise ValueError unless this is a valid k-path set on ``inst``."""
        if self.k != inst.k:
            raise ValueError(f"expected {inst.k} paths, got {self.k}")
        for index, path in enumerate(self.paths):
            if not path:
                raise ValueError(f"path {index} is empty")
            at = inst.s
            for e in path:
                if e.id >= inst.m or inst.edges[e.id] != e:
                    raise ValueError(f"path {index} uses edge {e.id} not in the instance")
                if e.tail != at:
                    raise ValueError(f"path {index} breaks at edge {e.id}")
                at = e.head
            if at != inst.t:
                raise ValueError(f"path {index} does not end at t")


@dataclass(frozen=True)
class Cycle:
    """A closed edge sequence in a residual graph with its cost and delay sums."""

    edges: tuple[Edge, ...]
    cost: int = field(init=False)
    delay: int = field(init=False)

    def __post_init__(self) -> None:
        if not self.edges:
            raise ValueError("a cycle needs at least one edge")
        for current, following in zip(self.edges, self.edges[1:] + self.edges[:1], strict=True):
            if current.head != following.tail:
                raise ValueError(f"edges {current.id} and {following.id} do not chain")
        if len({e.id for e in self.edges}) != len(self.edges):
            raise ValueError("cycle repeats an edge")
        object.__setattr__(self, "cost", sum(e.cost for e in self.edges))
        object.__setattr__(self, "delay", sum(e.delay for e in self.edges))

    @classmethod
    def canonical(cls, edges: Sequence[Edge]) -> "Cycle":
        """Rotate so the smallest edge id comes first."""
        start = min(range(len(edges)), key=lambda i: edges[i].id)
        return cls(tuple(edges[start:]) + tuple(edges[:start]))

    @property
    def key(self) -> tuple[int, ...]:
        """Edge-id sequence, rotated to start at the smallest id."""
        ids = [e.id for e in self.edges]
        start = ids.index(min(ids))
        return tuple(ids[start:] + ids[:start])

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(e.tail for e in self.edges)

    def __len__(self) -> int:
        return len(self.edges)
