from krsp_solver.flow.phase1 import (
    check_feasible,
    fractional_krsp_lp,
    min_cost_k_disjoint,
    min_delay_k_disjoint,
    phase1_solution,
)
from krsp_solver.flow.residual import (
    ResidualGraph,
    build_residual,
    decompose_to_paths,
    diff_cycles,
    reverse_edge,
    symmetric_diff,
)

__all__ = [
    "ResidualGraph",
    "build_residual",
    "check_feasible",
    "decompose_to_paths",
    "diff_cycles",
    "fractional_krsp_lp",
    "min_cost_k_disjoint",
    "min_delay_k_disjoint",
    "phase1_solution",
    "reverse_edge",
    "symmetric_diff",
]
