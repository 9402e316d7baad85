"""LP-based branch and bound with lazy cuts and 0/1 solution enumeration."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

from .model import (INF, Constraint, InvalidBounds, LinExpr, Model,
                    ModelError, ObjSense, Sense, VarId, VarKind)
from .simplex import (DEFAULT_ITERATION_LIMIT, LpStatus, solve_relaxation)

INT_TOL = 1e-6
BOUND_TOL = 1e-6

_log = logging.getLogger(__name__)

#: Callback receiving a candidate integer assignment; returns violated cuts.
LazyCutHandler = Callable[[Dict[VarId, float]], List[Constraint]]


class InvalidLazyCut(ModelError):
    pass


class NotBinaryModel(ModelError):
    pass


class EnumerationLimit(ModelError):
    """Enumeration stopped by a solver limit; carries the partial list."""

    def __init__(self, solutions):
        self.solutions = solutions
        super().__init__(f"limit reached after {len(solutions)} solutions")


class SolStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    LIMIT_REACHED = "limit_reached"


@dataclass
class SolveConfig:
    time_limit: Optional[float] = None
    node_limit: Optional[int] = None
    lazy: Optional[LazyCutHandler] = None
    lp_iteration_limit: int = DEFAULT_ITERATION_LIMIT


@dataclass
class Solution:
    status: SolStatus
    values: Optional[Dict[VarId, float]] = None
    objective: Optional[float] = None
    stats: Dict[str, float] = field(default_factory=dict)


@dataclass
class _Node:
    bounds: Dict[VarId, Tuple[float, float]]
    parent_bound: Optional[float]
    depth: int


def solve(model: Model, config: Optional[SolveConfig] = None) -> Solution:
    """Solve a model to proven integer optimality by branch and bound.

    Lazy cuts from config.lazy are separated at integer candidates; an
    incumbent is only accepted once the handler returns no cuts.
    """
    config = config or SolveConfig()
    start = time.perf_counter()
    maximize = model.objective[0] is ObjSense.MAXIMIZE

    int_vars = [vid for vid, v in enumerate(model.variables)
                if v.kind is not VarKind.CONTINUOUS]
    for vid in int_vars:
        v = model.variables[vid]
        if not (v.lower > -INF and v.upper < INF):
            raise InvalidBounds(
                f"integer variable {v.name!r} needs finite bounds for solving")

    cuts: List[Constraint] = []
    incumbent: Optional[Dict[VarId, float]] = None
    incumbent_obj: Optional[float] = None
    stats = {"nodes_explored": 0, "lp_iterations_total": 0,
             "cuts_added": 0, "wall_time": 0.0}
    limit_hit = False
    unbounded = False

    def better(a: float, b: float) -> bool:
        return a > b + BOUND_TOL if maximize else a < b - BOUND_TOL

    stack: List[_Node] = [_Node({}, None, 0)]
    while stack:
        if config.node_limit is not None and \
                stats["nodes_explored"] >= config.node_limit:
            limit_hit = True
            break
        if config.time_limit is not None and \
                time.perf_counter() - start > config.time_limit:
            limit_hit = True
            break
        node = stack.pop()
        stats["nodes_explored"] += 1
        if stats["nodes_explored"] % 500 == 0:
            _log.info("explored %d nodes, incumbent %s, %d open",
                      stats["nodes_explored"], incumbent_obj, len(stack))

        # Re-solve the node LP until the lazy handler accepts the candidate.
        while True:
            res = solve_relaxation(model, var_bounds=node.bounds,
                                   extra_constraints=cuts,
                                   iteration_limit=config.lp_iteration_limit)
            stats["lp_iterations_total"] += res.iterations
            if res.status is LpStatus.INFEASIBLE:
                break
            if res.status is LpStatus.UNBOUNDED:
                unbounded = True
                break
            if incumbent_obj is not None and \
                    not better(res.objective, incumbent_obj):
                break  # bound dominated

            frac_var = _most_fractional(res.values, int_vars)
            if frac_var is not None:
                _branch(stack, node, frac_var, res.values[frac_var],
                        model, maximize, res.objective)
                break

            candidate = dict(res.values)
            for vid in int_vars:
                candidate[vid] = float(round(candidate[vid]))
            if config.lazy is not None:
                new_cuts = config.lazy(candidate)
                if new_cuts:
                    for cut in new_cuts:
                        if cut.residual(candidate) <= INT_TOL:
                            raise InvalidLazyCut(
                                f"cut {cut.name!r} is not violated by the "
                                f"candidate it was generated for")
                    cuts.extend(_fold(c) for c in new_cuts)
                    stats["cuts_added"] += len(new_cuts)
                    continue  # re-solve this node with the new cuts
            obj = model.objective_value(candidate)
            if incumbent_obj is None or better(obj, incumbent_obj):
                incumbent = candidate
                incumbent_obj = obj
            break
        if unbounded:
            break

    stats["wall_time"] = time.perf_counter() - start
    if unbounded:
        return Solution(SolStatus.UNBOUNDED, stats=stats)
    if limit_hit:
        return Solution(SolStatus.LIMIT_REACHED, values=incumbent,
                        objective=incumbent_obj, stats=stats)
    if incumbent is None:
        return Solution(SolStatus.INFEASIBLE, stats=stats)
    return Solution(SolStatus.OPTIMAL, values=incumbent,
                    objective=incumbent_obj, stats=stats)


def _fold(con: Constraint) -> Constraint:
    if con.expr.constant == 0.0:
        return con
    expr = con.expr.copy()
    rhs = con.rhs - expr.constant
    expr.constant = 0.0
    return Constraint(con.name, expr, con.sense, rhs)


def _most_fractional(values, int_vars):
    """Branch variable: fractional part closest to 0.5, ties by lowest id."""
    best = None
    best_score = None
    for vid in int_vars:
        x = values[vid]
        frac = x - math.floor(x)
        if min(frac, 1.0 - frac) <= INT_TOL:
            continue
        score = abs(frac - 0.5)
        if best_score is None or score < best_score - 1e-12:
            best, best_score = vid, score
    return best


def _branch(stack, node, vid, x, model, maximize, bound):
    var = model.variables[vid]
    lo, hi = node.bounds.get(vid, (var.lower, var.upper))
    floor_child = _Node({**node.bounds, vid: (lo, math.floor(x))},
                        bound, node.depth + 1)
    ceil_child = _Node({**node.bounds, vid: (math.ceil(x), hi)},
                       bound, node.depth + 1)
    if maximize:
        stack.append(floor_child)
        stack.append(ceil_child)  # popped first
    else:
        stack.append(ceil_child)
        stack.append(floor_child)


def enumerate_optimal(model: Model, config: Optional[SolveConfig] = None,
                      max_solutions: Optional[int] = None) -> List[Solution]:
    """Enumerate all distinct optimal 0/1 solutions via no-good cuts."""
    used = set(model.objective[1].terms)
    for con in model.constraints:
        used.update(con.expr.terms)
    for vid in used:
        if model.variables[vid].kind is not VarKind.BINARY:
            raise NotBinaryModel(
                f"variable {model.variables[vid].name!r} is not binary")

    first = solve(model, config)
    if first.status is SolStatus.INFEASIBLE:
        return []
    if first.status is not SolStatus.OPTIMAL:
        raise EnumerationLimit([])

    z = first.objective
    work = _copy_model(model)
    sense, obj = model.objective
    work.add_constraint("_enum_obj_lb", obj.copy(), Sense.GE, z - INT_TOL)
    work.add_constraint("_enum_obj_ub", obj.copy(), Sense.LE, z + INT_TOL)

    solutions: List[Solution] = [first]
    seen = {_key(first.values, used)}
    k = 0
    while max_solutions is None or len(solutions) < max_solutions:
        last = solutions[-1].values
        ones = [vid for vid in sorted(used) if round(last[vid]) == 1]
        zeros = [vid for vid in sorted(used) if round(last[vid]) == 0]
        cut = LinExpr()
        for vid in ones:
            cut.add_term(vid, 1.0)
        for vid in zeros:
            cut.add_term(vid, -1.0)
        k += 1
        work.add_constraint(f"_nogood_{k}", cut, Sense.LE, len(ones) - 1)
        nxt = solve(work, config)
        if nxt.status is SolStatus.INFEASIBLE:
            break
        if nxt.status is not SolStatus.OPTIMAL:
            raise EnumerationLimit(solutions)
        key = _key(nxt.values, used)
        if key in seen:  # safety: no-good cuts make this unreachable
            break
        seen.add(key)
        solutions.append(nxt)
    return solutions


def _key(values, used):
    return tuple(int(round(values[vid])) for vid in sorted(used))


def _copy_model(model: Model) -> Model:
    clone = Model(model.name)
    for v in model.variables:
        clone.add_variable(v.name, v.lower, v.upper, v.kind)
    for con in model.constraints:
        clone.add_constraint(con.name, con.expr.copy(), con.sense, con.rhs)
    clone.set_objective(model.objective[0], model.objective[1].copy())
    return clone
