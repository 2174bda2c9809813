from krsp_solver.solver.ladder import estimate_copt
from krsp_solver.solver.loop import CancellationRun, iteration_cap, run_cancellation, solve
from krsp_solver.solver.options import IterationRecord, Solution, SolverOptions
from krsp_solver.solver.scaling import scale_instance, scaling_granularity

__all__ = [
    "CancellationRun",
    "IterationRecord",
    "Solution",
    "SolverOptions",
    "estimate_copt",
    "iteration_cap",
    "run_cancellation",
    "scale_instance",
    "scaling_granularity",
    "solve",
]
