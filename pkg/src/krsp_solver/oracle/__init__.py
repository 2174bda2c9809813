from krsp_solver.oracle.brute import BruteForceResult, brute_delay_range, brute_krsp
from krsp_solver.oracle.cycles import enumerate_simple_cycles
from krsp_solver.oracle.verify import verify_bicameral

__all__ = [
    "BruteForceResult",
    "brute_delay_range",
    "brute_krsp",
    "enumerate_simple_cycles",
    "verify_bicameral",
]
