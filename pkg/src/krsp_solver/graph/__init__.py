from krsp_solver.graph.core import Cycle, Edge, Instance, PathSet
from krsp_solver.graph.generator import gen_random_instance
from krsp_solver.graph.io import parse_instance, render_instance

__all__ = [
    "Cycle",
    "Edge",
    "Instance",
    "PathSet",
    "gen_random_instance",
    "parse_instance",
    "render_instance",
]
