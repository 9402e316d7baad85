"""Seeded random instance generators shared by the test modules."""

from __future__ import annotations

import itertools
import math
import random
from typing import List, Optional, Tuple

from optlab.model import (INF, LinExpr, Model, ObjSense, Sense, VarKind)


def random_model(rng: random.Random, max_vars: int = 8,
                 max_cons: int = 6) -> Model:
    """A random mixed model exercising every writer feature: all three
    variable kinds, every bound shape, all senses, and fractional data."""
    model = Model(f"random_{rng.randrange(10 ** 6)}")
    n = rng.randint(1, max_vars)
    for k in range(n):
        kind = rng.choice([VarKind.CONTINUOUS, VarKind.CONTINUOUS,
                           VarKind.INTEGER, VarKind.BINARY])
        if kind is VarKind.BINARY:
            model.add_binary(f"x{k}")
            continue
        shape = rng.randrange(5)
        if shape == 0:
            lo, hi = 0.0, INF
        elif shape == 1:
            lo, hi = -INF, INF
        elif shape == 2:
            lo, hi = _coeff(rng), INF
        elif shape == 3:
            lo, hi = -INF, _coeff(rng)
        else:
            a, b = sorted((_coeff(rng), _coeff(rng)))
            lo, hi = a, b
        model.add_variable(f"x{k}", lo, hi, kind)

    # Every variable appears in the objective so the parser reconstructs
    # variable ids in construction order and round trips are exact.
    obj = LinExpr()
    for k in range(n):
        obj.add_term(k, _nonzero(rng))
    model.set_objective(rng.choice([ObjSense.MINIMIZE, ObjSense.MAXIMIZE]),
                        obj)

    for c in range(rng.randint(1, max_cons)):
        expr = LinExpr()
        for k in rng.sample(range(n), rng.randint(1, n)):
            expr.add_term(k, _nonzero(rng))
        model.add_constraint(f"c{c}", expr,
                             rng.choice([Sense.LE, Sense.GE, Sense.EQ]),
                             _coeff(rng))
    return model


def _coeff(rng: random.Random) -> float:
    if rng.random() < 0.5:
        return float(rng.randint(-9, 9))
    return round(rng.uniform(-10.0, 10.0), 3)


def _nonzero(rng: random.Random) -> float:
    while True:
        c = _coeff(rng)
        if c != 0.0:
            return c


def random_bounded_ilp(rng: random.Random, max_vars: int = 6,
                       max_cons: int = 5) -> Model:
    """A small all-integer model with finite bounds, solvable exhaustively."""
    model = Model("ilp")
    n = rng.randint(1, max_vars)
    for k in range(n):
        if rng.random() < 0.5:
            model.add_binary(f"x{k}")
        else:
            lo = rng.randint(-2, 1)
            model.add_variable(f"x{k}", lo, lo + rng.randint(1, 3),
                               VarKind.INTEGER)
    obj = LinExpr()
    for k in range(n):
        obj.add_term(k, rng.randint(-5, 5))
    model.set_objective(rng.choice([ObjSense.MINIMIZE, ObjSense.MAXIMIZE]),
                        obj)
    for c in range(rng.randint(1, max_cons)):
        expr = LinExpr()
        for k in rng.sample(range(n), rng.randint(1, n)):
            expr.add_term(k, rng.randint(-4, 4))
        model.add_constraint(f"c{c}", expr,
                             rng.choice([Sense.LE, Sense.GE, Sense.EQ]),
                             rng.randint(-6, 6))
    return model


def exhaustive_ilp_optimum(model: Model) -> Optional[float]:
    """Best objective over the full integer box, or None if infeasible."""
    ranges = [range(int(v.lower), int(v.upper) + 1) for v in model.variables]
    maximize = model.objective[0] is ObjSense.MAXIMIZE
    best = None
    for combo in itertools.product(*ranges):
        values = dict(enumerate(float(x) for x in combo))
        if any(con.residual(values) > 1e-9 for con in model.constraints):
            continue
        obj = model.objective_value(values)
        if best is None or (obj > best if maximize else obj < best):
            best = obj
    return best


def random_points(rng: random.Random, n: int,
                  span: float = 100.0) -> List[Tuple[float, float]]:
    """Distinct random points in a span x span box."""
    points: List[Tuple[float, float]] = []
    seen = set()
    while len(points) < n:
        p = (round(rng.uniform(0.0, span), 3), round(rng.uniform(0.0, span), 3))
        if p not in seen:
            seen.add(p)
            points.append(p)
    return points


def random_digraph(rng: random.Random, n_nodes: int,
                   arc_prob: float = 0.25) -> List[Tuple[str, str, float]]:
    """Random arc list over named nodes with nonnegative costs."""
    names = [f"n{k}" for k in range(n_nodes)]
    arcs = []
    for u in names:
        for v in names:
            if u != v and rng.random() < arc_prob:
                arcs.append((u, v, round(rng.uniform(0.0, 20.0), 3)))
    return arcs
