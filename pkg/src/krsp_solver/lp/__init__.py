from krsp_solver.lp.circulation import CirculationCycle, decompose_circulation
from krsp_solver.lp.simplex import LpProblem, LpRow, LpSolution, solve_lp

__all__ = [
    "CirculationCycle",
    "LpProblem",
    "LpRow",
    "LpSolution",
    "decompose_circulation",
    "solve_lp",
]
