"""Exact red-blue separation by lines: checker, FPT axis-parallel solver,
brute-force oracles and the hardness-reduction instance generator."""

from .axis_fpt import InseparableError, Solution, solve_axis_parallel
from .exact_search import solve_axis_bruteforce, solve_general_bruteforce
from .geometry import FeasibilityReport, Instance, Line, Point, is_feasible
from .reduction import S2THSInstance, build_rbs_instance, witness_lines

__all__ = [
    "FeasibilityReport",
    "InseparableError",
    "Instance",
    "Line",
    "Point",
    "S2THSInstance",
    "Solution",
    "build_rbs_instance",
    "is_feasible",
    "solve_axis_bruteforce",
    "solve_axis_parallel",
    "solve_general_bruteforce",
    "witness_lines",
]
__version__ = "0.1.0"
