from krsp_solver.bicameral.aux import AuxEdge, AuxGraph, build_aux, lift_cycle, make_cycle_lp
from krsp_solver.bicameral.classify import CycleClass, SearchContext, classify_cycle
from krsp_solver.bicameral.search import (
    clear_aux_cache,
    find_bicameral,
    select_bicameral,
    solve_aux,
)

__all__ = [
    "AuxEdge",
    "AuxGraph",
    "CycleClass",
    "SearchContext",
    "build_aux",
    "classify_cycle",
    "clear_aux_cache",
    "find_bicameral",
    "lift_cycle",
    "make_cycle_lp",
    "select_bicameral",
    "solve_aux",
]
