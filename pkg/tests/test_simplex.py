"""Two-phase simplex: standard-form conversion, solves, degeneracy, limits."""

import random

import numpy as np
import pytest

from optlab.model import (INF, LinExpr, Model, ObjSense, Sense, VarKind)
from optlab.simplex import (COL_ARTIFICIAL, COL_BOUND_SLACK, COL_SLACK,
                            COL_STRUCTURAL, IterationLimitExceeded, LpStatus,
                            solve_relaxation, solve_standard_form,
                            to_standard_form)
from optlab.puzzles.queens import build_queens

from instances import random_bounded_ilp
from oracles import beale_cycling_instance


def _lp(sense, obj, cons, bounds=None):
    """cons: list of ({name: coeff}, sense, rhs) over named variables."""
    model = Model("lp")
    names = []
    for terms, _, _ in cons:
        names.extend(terms)
    names.extend(obj)
    if bounds:
        names.extend(bounds)
    for name in dict.fromkeys(names):
        lo, hi = (bounds or {}).get(name, (0.0, INF))
        model.add_variable(name, lo, hi)
    model.set_objective(sense, LinExpr(
        {model.var_id(v): c for v, c in obj.items()}))
    for k, (terms, s, rhs) in enumerate(cons):
        model.add_constraint(
            f"c{k}", LinExpr({model.var_id(v): c for v, c in terms.items()}),
            s, rhs)
    return model


class TestSolves:
    def test_textbook_maximum(self):
        model = _lp(ObjSense.MAXIMIZE, {"x": 3.0, "y": 2.0},
                    [({"x": 1.0, "y": 1.0}, Sense.LE, 4.0),
                     ({"x": 1.0}, Sense.LE, 2.0)])
        res = solve_relaxation(model)
        assert res.status is LpStatus.OPTIMAL
        assert res.objective == pytest.approx(10.0)
        assert res.values[model.var_id("x")] == pytest.approx(2.0)
        assert res.values[model.var_id("y")] == pytest.approx(2.0)

    def test_minimum_with_equalities(self):
        model = _lp(ObjSense.MINIMIZE, {"x": 1.0, "y": 2.0},
                    [({"x": 1.0, "y": 1.0}, Sense.EQ, 3.0),
                     ({"x": 1.0, "y": -1.0}, Sense.GE, -1.0)])
        res = solve_relaxation(model)
        assert res.status is LpStatus.OPTIMAL
        # objective is 3 + y after substituting the equality; y >= 0 binds.
        assert res.objective == pytest.approx(3.0)
        assert res.values[model.var_id("y")] == pytest.approx(0.0)

    def test_infeasible(self):
        model = _lp(ObjSense.MINIMIZE, {"x": 1.0},
                    [({"x": 1.0}, Sense.GE, 5.0),
                     ({"x": 1.0}, Sense.LE, 1.0)])
        assert solve_relaxation(model).status is LpStatus.INFEASIBLE

    def test_unbounded(self):
        model = _lp(ObjSense.MAXIMIZE, {"x": 1.0},
                    [({"x": -1.0, "y": 1.0}, Sense.LE, 1.0)])
        assert solve_relaxation(model).status is LpStatus.UNBOUNDED

    def test_negative_lower_bounds(self):
        model = _lp(ObjSense.MINIMIZE, {"x": 1.0, "y": 1.0},
                    [({"x": 1.0, "y": 1.0}, Sense.GE, -4.0)],
                    bounds={"x": (-3.0, 3.0), "y": (-2.0, 2.0)})
        res = solve_relaxation(model)
        # the box would allow -5 but the constraint stops at -4
        assert res.objective == pytest.approx(-4.0)

    def test_free_variable(self):
        model = _lp(ObjSense.MINIMIZE, {"x": 1.0},
                    [({"x": 1.0}, Sense.GE, -7.0)],
                    bounds={"x": (-INF, INF)})
        res = solve_relaxation(model)
        assert res.objective == pytest.approx(-7.0)
        assert res.values[0] == pytest.approx(-7.0)

    def test_fixed_variable_and_offset(self):
        model = _lp(ObjSense.MAXIMIZE, {"x": 2.0, "y": 1.0},
                    [({"y": 1.0}, Sense.LE, 5.0)],
                    bounds={"x": (3.0, 3.0)})
        res = solve_relaxation(model)
        assert res.objective == pytest.approx(11.0)
        assert res.values[model.var_id("x")] == 3.0

    def test_crossed_bound_override_is_infeasible(self):
        model = _lp(ObjSense.MINIMIZE, {"x": 1.0},
                    [({"x": 1.0}, Sense.LE, 9.0)])
        res = solve_relaxation(model, var_bounds={0: (2.0, 1.0)})
        assert res.status is LpStatus.INFEASIBLE

    def test_objective_constant_carried(self):
        model = _lp(ObjSense.MINIMIZE, {"x": 1.0},
                    [({"x": 1.0}, Sense.GE, 2.0)])
        sense, obj = model.objective
        obj = obj + 10.0
        model.set_objective(sense, obj)
        assert solve_relaxation(model).objective == pytest.approx(12.0)

    def test_extra_constraints_tighten(self):
        model = _lp(ObjSense.MAXIMIZE, {"x": 1.0},
                    [({"x": 1.0}, Sense.LE, 10.0)])
        base = solve_relaxation(model)
        cut = model.constraints[0].__class__(
            "cut", LinExpr({0: 1.0}), Sense.LE, 4.0)
        tighter = solve_relaxation(model, extra_constraints=[cut])
        assert base.objective == pytest.approx(10.0)
        assert tighter.objective == pytest.approx(4.0)

    def test_var_bounds_override(self):
        model = _lp(ObjSense.MAXIMIZE, {"x": 1.0},
                    [({"x": 1.0}, Sense.LE, 10.0)])
        res = solve_relaxation(model, var_bounds={0: (0.0, 3.0)})
        assert res.objective == pytest.approx(3.0)


class TestStandardForm:
    def test_queens_column_census(self):
        # 16 cells; every line constraint is <=, so one slack per row and
        # no artificials; upper bounds of binaries are dominated by the
        # row constraints when dropping is on.
        sf = to_standard_form(build_queens(4),
                              drop_redundant_upper_bounds=False)
        assert sf.col_count(COL_STRUCTURAL) == 16
        assert sf.col_count(COL_SLACK) == sf.n_constraint_rows
        assert sf.col_count(COL_ARTIFICIAL) == 0
        assert sf.col_count(COL_BOUND_SLACK) == sf.n_bound_rows == 16
        dropped = to_standard_form(build_queens(4),
                                   drop_redundant_upper_bounds=True)
        assert dropped.n_bound_rows == 0

    def test_senses_get_slack_surplus_artificial(self):
        model = _lp(ObjSense.MINIMIZE, {"x": 1.0, "y": 1.0},
                    [({"x": 1.0}, Sense.LE, 2.0),
                     ({"y": 1.0}, Sense.GE, 1.0),
                     ({"x": 1.0, "y": 1.0}, Sense.EQ, 3.0)])
        sf = to_standard_form(model)
        assert sf.col_count(COL_SLACK) == 2      # one slack, one surplus
        assert sf.col_count(COL_ARTIFICIAL) == 2  # >= and = rows

    def test_rhs_nonnegative(self):
        model = _lp(ObjSense.MINIMIZE, {"x": 1.0},
                    [({"x": -1.0}, Sense.LE, -2.0)])
        sf = to_standard_form(model)
        assert (sf.b >= 0).all()
        res = solve_standard_form(sf)
        assert res.values[0] == pytest.approx(2.0)

    def test_maximize_negates_costs(self):
        model = _lp(ObjSense.MAXIMIZE, {"x": 5.0},
                    [({"x": 1.0}, Sense.LE, 1.0)])
        sf = to_standard_form(model)
        assert sf.maximize
        assert sf.c[0] == -5.0


class TestDegeneracyAndLimits:
    def test_cycling_instance_terminates(self):
        rows, objective, optimum = beale_cycling_instance()
        model = Model("cycling")
        for k in range(len(objective)):
            model.add_variable(f"x{k}")
        model.set_objective(ObjSense.MINIMIZE,
                            LinExpr(dict(enumerate(objective))))
        for k, (coeffs, rhs) in enumerate(rows):
            model.add_constraint(f"r{k}", LinExpr(dict(enumerate(coeffs))),
                                 Sense.LE, rhs)
        res = solve_relaxation(model)
        assert res.status is LpStatus.OPTIMAL
        assert res.objective == pytest.approx(optimum)
        assert res.values[0] == pytest.approx(0.04)

    def test_iteration_limit_raises(self):
        model = build_queens(6)
        with pytest.raises(IterationLimitExceeded):
            solve_relaxation(model, iteration_limit=2)

    def test_trace_is_monotone_for_minimization(self):
        model = _lp(ObjSense.MINIMIZE, {"x": 2.0, "y": 3.0},
                    [({"x": 1.0, "y": 1.0}, Sense.GE, 4.0),
                     ({"x": 1.0, "y": 2.0}, Sense.GE, 6.0)])
        trace = []
        res = solve_relaxation(model, trace=trace)
        assert res.status is LpStatus.OPTIMAL
        assert len(trace) >= 1
        assert trace[-1] == pytest.approx(res.objective)
        diffs = np.diff(np.asarray(trace))
        assert (diffs <= 1e-7).all()


class TestAgainstEnumeration:
    def test_relaxation_bounds_integer_optimum(self):
        # On random boxed integer models the LP value must bound the best
        # integer point found by brute force.
        from instances import exhaustive_ilp_optimum
        rng = random.Random(5)
        checked = 0
        for _ in range(120):
            model = random_bounded_ilp(rng)
            best = exhaustive_ilp_optimum(model)
            if best is None:
                continue
            res = solve_relaxation(model)
            assert res.status is LpStatus.OPTIMAL
            maximize = model.objective[0] is ObjSense.MAXIMIZE
            if maximize:
                assert res.objective >= best - 1e-6
            else:
                assert res.objective <= best + 1e-6
            checked += 1
        assert checked >= 30
