"""optlab: a small exact ILP toolkit with puzzle models and TSP art."""

from .model import (INF, Constraint, LinExpr, Model, ObjSense, Sense,
                    VarKind, evaluate)
from .simplex import LpResult, LpStatus, solve_relaxation, to_standard_form
from .branch_and_bound import (Solution, SolStatus, SolveConfig,
                               enumerate_optimal, solve)
from .lp_io import parse_lp, write_lp

__all__ = [
    "INF", "Constraint", "LinExpr", "Model", "ObjSense", "Sense", "VarKind",
    "evaluate", "LpResult", "LpStatus", "solve_relaxation",
    "to_standard_form", "Solution", "SolStatus", "SolveConfig",
    "enumerate_optimal", "solve", "parse_lp", "write_lp",
]

__version__ = "0.1.0"
