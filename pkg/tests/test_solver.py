import logging
import math
from fractions import Fraction
from unittest.mock import patch

import pytest
from pydantic import ValidationError

from krsp_solver.bicameral import CycleClass
from krsp_solver.exceptions import SolverInvariantError
from krsp_solver.flow import phase1_solution
from krsp_solver.graph import Edge, Instance, gen_random_instance, render_instance
from krsp_solver.oracle import brute_delay_range, brute_krsp
from krsp_solver.solver import (
    SolverOptions,
    estimate_copt,
    iteration_cap,
    run_cancellation,
    scale_instance,
    scaling_granularity,
    solve,
)


def test_solve_fig1(fig1):
    """One type-1 step moves the second path onto the cost-2 detour."""
    solution = solve(fig1, SolverOptions())
    assert solution.status == "solved"
    assert solution.paths is not None
    assert solution.paths.id_paths() == [[0, 1, 4], [6]]
    assert (solution.paths.total_cost, solution.paths.total_delay) == (2, 4)
    assert solution.cost_estimate_used == 2
    assert solution.rungs_tried == (0, 1, 2)

    (record,) = solution.trace
    assert (record.D, record.C, record.delta_d, record.delta_c) == (5, 0, -1, 2)
    assert record.r == Fraction(-1, 2)
    assert record.cycle == (2, 4, 3)
    assert (record.cycle_cost, record.cycle_delay) == (2, -1)
    assert record.kind is CycleClass.TYPE1
    assert (record.dropped_cost, record.dropped_delay) == (0, 0)
    assert record.path_edge_ids == ((0, 1, 4), (6,))


@pytest.mark.parametrize("source", ["enumerate", "lp"])
def test_solve_fig1_other_sources(fig1, source):
    """The result does not depend on the cycle source here."""
    solution = solve(fig1, SolverOptions(cycle_source=source))
    assert solution.paths is not None
    assert solution.paths.edge_ids == frozenset({0, 1, 4, 6})


def test_solve_never_returns_expensive_pair(fig1):
    """The cost-9 pair s-a-t, s-t is never returned."""
    for source in ("hybrid", "enumerate", "lp"):
        solution = solve(fig1, SolverOptions(cycle_source=source))
        assert solution.paths is not None
        assert solution.paths.total_cost <= 2 * 2
        assert 5 not in solution.paths.edge_ids


def test_solve_parallel_refines_estimate(parallel):
    """The ladder accepts 5, bisection settles on 4."""
    solution = solve(parallel, SolverOptions())
    assert solution.status == "solved"
    assert solution.paths is not None
    assert solution.paths.id_paths() == [[1], [2]]
    assert (solution.paths.total_cost, solution.paths.total_delay) == (5, 1)
    assert solution.rungs_tried == (3, 5, 4)
    assert solution.cost_estimate_used == 4


def test_solve_without_refinement(parallel):
    """Without bisection the first accepted rung is reported."""
    solution = solve(parallel, SolverOptions(refine_estimate=False))
    assert solution.rungs_tried == (3, 5)
    assert solution.cost_estimate_used == 5


def test_solve_phase1_already_feasible(parallel):
    """Min-cost paths within D need no iterations."""
    solution = solve(parallel.with_delay_bound(4), SolverOptions())
    assert solution.status == "solved"
    assert solution.iterations == 0
    assert solution.paths is not None
    assert solution.paths.total_cost == 3
    assert solution.cost_estimate_used == 3


def test_solve_infeasible(single_path):
    """No k disjoint paths: infeasible, no paths."""
    solution = solve(single_path)
    assert solution.status == "infeasible"
    assert solution.paths is None
    assert solve(Instance(n=2, edges=(), t=1, k=1, D=0)).status == "infeasible"


def test_solve_delay_bound_too_tight(parallel):
    """Disjoint paths exist but none within D."""
    assert solve(parallel.with_delay_bound(0)).status == "infeasible"


def test_estimate_ladder(fig1, parallel):
    """Rungs grow by 3/2 (at least +1) from LB and end at the total cost."""
    assert estimate_copt(fig1) == [0, 1, 2, 3, 5, 8, 11]
    assert estimate_copt(parallel) == [3, 5, 6]
    assert estimate_copt(fig1, start=4) == [4, 6, 9, 11]
    assert estimate_copt(fig1, growth=Fraction(2)) == [0, 1, 2, 4, 8, 11]


def test_estimate_ladder_single_rung():
    """LB = UB gives one rung."""
    inst = Instance(n=2, edges=(Edge(id=0, tail=0, head=1, cost=3, delay=1),), t=1, k=1, D=1)
    assert estimate_copt(inst) == [3]


def test_scale_instance_formula():
    """d' = floor(d n / (eps1 D)), c' = floor(c n / (eps2 c_hat)), D' = floor(n / eps1)."""
    inst = Instance(
        n=5,
        edges=(
            Edge(id=0, tail=0, head=4, cost=3, delay=7),
            Edge(id=1, tail=0, head=4, cost=0, delay=0),
        ),
        t=4,
        k=1,
        D=10,
    )
    half = Fraction(1, 2)
    scaled = scale_instance(inst, half, half, 6)
    assert (scaled.edge(0).delay, scaled.edge(0).cost) == (7, 5)
    assert (scaled.edge(1).delay, scaled.edge(1).cost) == (0, 0)
    assert scaled.D == 10
    assert scale_instance(inst, half, half, 6, granularity=8).edge(0).delay == 11


def test_scale_instance_degenerate_bounds():
    """D = 0 keeps delays; a zero estimate keeps costs."""
    inst = Instance(n=3, edges=(Edge(id=0, tail=0, head=2, cost=4, delay=3),), t=2, k=1, D=0)
    scaled = scale_instance(inst, Fraction(1, 2), Fraction(1, 2), 0)
    assert scaled == inst
    with pytest.raises(ValueError):
        scale_instance(inst, Fraction(0), Fraction(1, 2), 1)


def test_scaling_granularity(fig1, parallel):
    """Granularity covers k simple paths of up to n - 1 edges."""
    assert scaling_granularity(fig1) == 8
    assert scaling_granularity(parallel) == 2


def test_scaled_mode_bounds(fig1):
    """Scaled mode keeps delay within (1 + eps1) D and cost within (2 + eps2) C_OPT."""
    solution = solve(fig1, SolverOptions(mode="scaled", epsilon1="1/2", epsilon2="1/2"))
    assert solution.status == "solved"
    assert solution.paths is not None
    solution.paths.validate_for(fig1)
    assert solution.paths.total_delay <= math.ceil(Fraction(3, 2) * fig1.D)
    assert solution.paths.total_cost <= math.ceil(Fraction(5, 2) * 2)


def test_scaled_mode_matches_oracle_bounds():
    """Scaled-mode bifactor bounds hold against the brute-force optimum."""
    eps1, eps2 = Fraction(1, 2), Fraction(1, 3)
    checked = 0
    for seed in range(30):
        inst = gen_random_instance(4 + seed % 2, 7 + seed % 3, 5, 5, 2, seed)
        span = brute_delay_range(inst)
        if span is None:
            continue
        inst = inst.with_delay_bound((span[0] + span[1]) // 2)
        opt = brute_krsp(inst)
        assert opt is not None

        solution = solve(
            inst, SolverOptions(mode="scaled", epsilon1=eps1, epsilon2=eps2, cycle_source="enumerate")
        )
        assert solution.status == "solved"
        assert solution.paths is not None
        solution.paths.validate_for(inst)
        assert solution.paths.total_delay <= (1 + eps1) * inst.D
        assert solution.paths.total_cost <= (2 + eps2) * opt.c_opt
        checked += 1
    assert checked >= 10


def test_options_validation():
    """Scaled mode needs positive epsilons; rational strings are accepted."""
    opts = SolverOptions(mode="scaled", epsilon1="0.25", epsilon2="1/3")
    assert (opts.epsilon1, opts.epsilon2) == (Fraction(1, 4), Fraction(1, 3))
    with pytest.raises(ValidationError, match="epsilon"):
        SolverOptions(mode="scaled", epsilon1=0)
    with pytest.raises(ValidationError):
        SolverOptions(cycle_source="magic")
    with pytest.raises(ValidationError):
        SolverOptions(max_iterations=0)
    assert SolverOptions(mode="exact", epsilon1=0).epsilon1 == 0


def test_run_cancellation_loose_estimate(fig1):
    """At estimate 9 the steeper (9, -5) cycle is cancelled instead."""
    run = run_cancellation(fig1, phase1_solution(fig1), 9, SolverOptions(cycle_source="enumerate"))
    assert run.success
    assert run.paths.id_paths() == [[0, 5], [6]]
    assert (run.paths.total_cost, run.paths.total_delay) == (9, 0)
    assert [r.cycle for r in run.trace] == [(1, 5, 3, 2)]


def test_run_cancellation_failure(fig1):
    """Below C_OPT the loop runs out of cycles and reports it."""
    run = run_cancellation(fig1, phase1_solution(fig1), 1)
    assert not run.success
    assert run.failure == "no-cycle"
    assert run.trace == []


def test_iteration_cap(fig1):
    """Cap is D * sum(c) * sum(d)."""
    assert iteration_cap(fig1) == 4 * 11 * 9


def test_ladder_exhausted_raises_with_state(fig1):
    """A failure at the last rung surfaces the full state."""
    with patch("krsp_solver.solver.loop.find_bicameral", return_value=None):
        with pytest.raises(SolverInvariantError) as excinfo:
            solve(fig1, SolverOptions())
    state = excinfo.value.state
    assert state["reason"] == "no-cycle"
    assert state["instance"] == render_instance(fig1)
    assert state["costEstimate"] == 11
    assert state["paths"] == [[0, 1, 2, 3], [6]]


def test_trace_emission(fig1, caplog):
    """With tracing on, every record is logged at INFO."""
    with caplog.at_level(logging.INFO, logger="krsp_solver.solver.loop"):
        solve(fig1, SolverOptions(trace=True))
    assert "Iteration" in caplog.text
    assert "'cycle': [2, 4, 3]" in caplog.text


def test_random_suite_bounds_and_trace_invariants():
    """Delay <= D, cost <= 2 C_OPT and consistent, monotone traces on random instances."""
    solved = 0
    for seed in range(40):
        inst = gen_random_instance(4 + seed % 3, 7 + seed % 5, 5, 5, 2, seed)
        span = brute_delay_range(inst)
        if span is None:
            continue
        inst = inst.with_delay_bound((span[0] + span[1]) // 2)
        opt = brute_krsp(inst)
        assert opt is not None

        solution = solve(inst, SolverOptions(cycle_source="enumerate"))
        assert solution.status == "solved"
        assert solution.paths is not None
        solution.paths.validate_for(inst)
        assert solution.paths.total_delay <= inst.D
        assert solution.paths.total_cost <= 2 * opt.c_opt
        assert solution.iterations <= iteration_cap(inst)

        trace = solution.trace
        for before, after in zip(trace, trace[1:]):
            assert after.D == before.D + before.cycle_delay - before.dropped_delay
            assert after.C == before.C + before.cycle_cost - before.dropped_cost
            if before.r is not None and after.r is not None:
                assert after.r > before.r or (after.r == before.r and after.D < before.D)
        if trace:
            last = trace[-1]
            assert solution.paths.total_delay == last.D + last.cycle_delay - last.dropped_delay
        solved += 1
    assert solved >= 20
