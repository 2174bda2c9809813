import pytest
from pydantic import ValidationError

from krsp_solver.exceptions import InstanceParseError
from krsp_solver.graph import (
    Cycle,
    Edge,
    Instance,
    PathSet,
    gen_random_instance,
    parse_instance,
    render_instance,
)


def test_parse_header_fields():
    """Header 'n m k D' maps straight onto the instance."""
    inst = parse_instance("4 4 2 10\n0 1 1 1\n1 3 1 1\n0 2 1 1\n2 3 1 1\n")
    assert (inst.n, inst.m, inst.k, inst.D) == (4, 4, 2, 10)
    assert (inst.s, inst.t) == (0, 3)
    assert inst.edge(2) == Edge(id=2, tail=0, head=2, cost=1, delay=1)


def test_parse_explicit_terminals():
    """Optional s and t in the header override the defaults."""
    inst = parse_instance("3 1 1 0 2 0\n2 0 5 5\n")
    assert (inst.s, inst.t) == (2, 0)


def test_parse_negative_cost_names_line():
    """Negative cost is rejected with the physical line number."""
    with pytest.raises(InstanceParseError, match="negative cost") as excinfo:
        parse_instance("3 2 1 5\n0 1 1 1\n\n1 2 -1 1\n")
    assert excinfo.value.line_number == 4
    assert str(excinfo.value).startswith("line 4: ")


@pytest.mark.parametrize(
    "text, message",
    [
        ("3 1 1 5\n0 1 1 -2\n", "negative delay"),
        ("3 1 1 5\n0 7 1 1\n", "dangling"),
        ("3 1 1 5\n1 1 1 1\n", "self-loop"),
        ("3 2 1 5\n0 1 1 1\n", "expected 2 edge lines"),
        ("3 0 1 5 1 1\n", "s = t"),
        ("3 1 1\n0 1 1 1\n", "header"),
        ("3 1 1 5\n0 1 x 1\n", "malformed"),
        ("# only a comment\n", "missing header"),
    ],
)
def test_parse_errors(text, message):
    """Each malformed input is reported as a parse error."""
    with pytest.raises(InstanceParseError, match=message):
        parse_instance(text)


def test_empty_edge_list_is_valid():
    """An instance without edges parses; the solver reports it infeasible later."""
    inst = parse_instance("2 0 1 0\n")
    assert inst.m == 0


def test_render_parses_back(fig1):
    """render_instance output parses to the same instance."""
    assert parse_instance(render_instance(fig1)) == fig1
    odd = Instance(n=3, edges=(Edge(id=0, tail=2, head=0, cost=1, delay=2),), s=2, t=0, k=1, D=3)
    assert render_instance(odd).splitlines()[0] == "3 1 1 3 2 0"
    assert parse_instance(render_instance(odd)) == odd


def test_instance_rejects_bad_edges():
    """Model validation mirrors the parser checks."""
    with pytest.raises(ValidationError, match="self-loop"):
        Instance(n=2, edges=(Edge(id=0, tail=1, head=1, cost=0, delay=0),), t=1, k=1, D=0)
    with pytest.raises(ValidationError, match="dense"):
        Instance(n=2, edges=(Edge(id=3, tail=0, head=1, cost=0, delay=0),), t=1, k=1, D=0)
    with pytest.raises(ValidationError, match="reversed"):
        Instance(n=2, edges=(Edge(id=0, tail=0, head=1, cost=0, delay=0, origin=0),), t=1, k=1, D=0)


def test_instance_totals(fig1):
    """Total cost and delay sum every edge."""
    assert fig1.total_cost == 11
    assert fig1.total_delay == 9
    assert fig1.with_delay_bound(7).D == 7
    assert fig1.D == 4


def test_generator_is_deterministic():
    """Same seed, same instance."""
    a = gen_random_instance(5, 10, 5, 5, 2, seed=7)
    b = gen_random_instance(5, 10, 5, 5, 2, seed=7)
    assert a == b
    assert a.m == 10
    assert all(e.tail != e.head for e in a.edges)
    assert (a.s, a.t, a.D) == (0, 4, 0)


def test_generator_zero_max_cost():
    """maxCost=0 gives all-zero costs."""
    inst = gen_random_instance(6, 12, 0, 5, 2, seed=1)
    assert all(e.cost == 0 for e in inst.edges)
    assert all(0 <= e.delay <= 5 for e in inst.edges)


def test_pathset_totals_and_disjointness(fig1):
    """PathSet caches totals and refuses shared edges."""
    paths = PathSet.from_paths([[fig1.edge(0), fig1.edge(1), fig1.edge(4)], [fig1.edge(6)]])
    assert (paths.total_cost, paths.total_delay) == (2, 4)
    assert paths.id_paths() == [[0, 1, 4], [6]]
    assert paths.edge_ids == frozenset({0, 1, 4, 6})
    paths.validate_for(fig1)

    with pytest.raises(ValidationError, match="edge-disjoint"):
        PathSet.from_paths([[fig1.edge(6)], [fig1.edge(6)]])
    with pytest.raises(ValidationError, match="total_cost"):
        PathSet(paths=((fig1.edge(4),),), total_cost=0, total_delay=4)


def test_pathset_validate_for_rejects_broken_path(fig1):
    """Paths must chain from s to t."""
    broken = PathSet.from_paths([[fig1.edge(0), fig1.edge(4)], [fig1.edge(6)]])
    with pytest.raises(ValueError, match="breaks"):
        broken.validate_for(fig1)
    short = PathSet.from_paths([[fig1.edge(6)]])
    with pytest.raises(ValueError, match="expected 2 paths"):
        short.validate_for(fig1)


def test_cycle_canonical_rotation():
    """Cycles start at their smallest edge id and sum their weights."""
    edges = [
        Edge(id=4, tail=2, head=4, cost=2, delay=4),
        Edge(id=3, tail=4, head=3, cost=0, delay=0, origin=3),
        Edge(id=2, tail=3, head=2, cost=0, delay=-5, origin=2),
    ]
    cycle = Cycle.canonical(edges)
    assert cycle.key == (2, 4, 3)
    assert [e.id for e in cycle.edges] == [2, 4, 3]
    assert (cycle.cost, cycle.delay) == (2, -1)
    assert cycle.vertices == (3, 2, 4)
    assert len(cycle) == 3


def test_cycle_must_chain():
    """Edges that do not close up are rejected."""
    with pytest.raises(ValueError, match="do not chain"):
        Cycle((Edge(id=0, tail=0, head=1, cost=0, delay=0), Edge(id=1, tail=2, head=0, cost=0, delay=0)))
