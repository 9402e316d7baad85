"""Two-phase primal simplex over a dense tableau.

Dantzig pricing with a permanent switch to Bland's rule after a stalling
streak of degenerate pivots, which guarantees termination. The pivot loop
is compiled with numba when available; a pure-numpy fallback keeps the
module importable without it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .model import (INF, Constraint, LinExpr, Model, ModelError, ObjSense,
                    Sense, VarId)

REDUCED_COST_TOL = 1e-9
FEAS_TOL = 1e-7
PIVOT_TOL = 1e-10
DEFAULT_ITERATION_LIMIT = 100_000

_STATUS_OPTIMAL = 0
_STATUS_UNBOUNDED = 1
_STATUS_ITER_LIMIT = 2


class IterationLimitExceeded(ModelError):
    pass


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LpResult:
    status: LpStatus
    values: Optional[Dict[VarId, float]] = None
    objective: Optional[float] = None
    iterations: int = 0


# Column provenance labels for StandardForm bookkeeping.
COL_STRUCTURAL = "structural"
COL_SLACK = "slack"
COL_BOUND_SLACK = "bound_slack"
COL_ARTIFICIAL = "artificial"


@dataclass
class StandardForm:
    """Equality-form LP: A x = b, x >= 0, minimize c x + offset."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    basis: List[int]
    var_map: Dict[VarId, tuple]
    col_kinds: List[str]
    n_constraint_rows: int
    n_bound_rows: int
    obj_offset: float
    maximize: bool

    def col_count(self, kind: str) -> int:
        return self.col_kinds.count(kind)


# ---------------------------------------------------------------------------
# dense row extraction (cached per model)


def _dense_rows(constraints: Sequence[Constraint], n_vars: int):
    A = np.zeros((len(constraints), n_vars))
    rhs = np.empty(len(constraints))
    senses = np.empty(len(constraints), dtype=np.int8)  # -1 LE, 0 EQ, +1 GE
    code = {Sense.LE: -1, Sense.EQ: 0, Sense.GE: 1}
    for k, con in enumerate(constraints):
        row = A[k]
        for vid, coeff in con.expr.terms.items():
            if not (0 <= vid < n_vars):
                raise ModelError(f"constraint {con.name!r} uses unknown id {vid}")
            row[vid] = coeff
        rhs[k] = con.rhs - con.expr.constant
        senses[k] = code[con.sense]
    return A, rhs, senses


def _model_rows(model: Model):
    cache = getattr(model, "_row_cache", None)
    key = (len(model.constraints), model.num_vars, id(model.objective[1]))
    if cache is not None and cache[0] == key:
        return cache[1]
    A, rhs, senses = _dense_rows(model.constraints, model.num_vars)
    obj = np.zeros(model.num_vars)
    for vid, coeff in model.objective[1].terms.items():
        obj[vid] = coeff
    data = (A, rhs, senses, obj, model.objective[1].constant)
    model._row_cache = (key, data)
    return data


def _effective_bounds(model: Model, var_bounds):
    lo = np.array([v.lower for v in model.variables])
    hi = np.array([v.upper for v in model.variables])
    if var_bounds:
        for vid, (l, h) in var_bounds.items():
            lo[vid] = l
            hi[vid] = h
    return lo, hi


def to_standard_form(model: Model, *,
                     var_bounds: Optional[Mapping[VarId, Tuple[float, float]]] = None,
                     extra_constraints: Sequence[Constraint] = (),
                     drop_redundant_upper_bounds: bool = False) -> StandardForm:
    """Convert to equality standard form with nonnegative variables.

    Finite lower bounds are shifted out; variables with only an upper bound
    are mirrored; free variables are split. Finite upper bounds become
    explicit rows unless `drop_redundant_upper_bounds` detects a dominating
    nonnegative constraint row.
    """
    n_vars = model.num_vars
    A_model, rhs_model, senses_model, obj_vec, obj_const = _model_rows(model)
    if extra_constraints:
        A_x, rhs_x, senses_x = _dense_rows(extra_constraints, n_vars)
        A_all = np.vstack([A_model, A_x]) if len(A_model) else A_x
        rhs_all = np.concatenate([rhs_model, rhs_x])
        senses_all = np.concatenate([senses_model, senses_x])
    else:
        A_all = A_model
        rhs_all = rhs_model
        senses_all = senses_model

    lo, hi = _effective_bounds(model, var_bounds)
    maximize = model.objective[0] is ObjSense.MAXIMIZE

    bad = lo > hi + FEAS_TOL
    fixed = (lo == hi) & ~bad
    shift = (lo > -INF) & ~fixed & ~bad
    neg = (lo == -INF) & (hi < INF) & ~bad
    split = (lo == -INF) & (hi == INF) & ~bad

    # substitution offset per variable: x = sign * x' + offset
    offset = np.where(fixed, lo, 0.0)
    offset = np.where(shift, lo, offset)
    offset = np.where(neg, hi, offset)
    offset = np.where(np.isfinite(offset), offset, 0.0)

    var_map: Dict[VarId, tuple] = {}
    cols: List[int] = []        # source variable of each structural column
    signs: List[float] = []
    for vid in range(n_vars):
        if bad[vid]:
            var_map[vid] = ("infeasible", lo[vid], hi[vid])
        elif fixed[vid]:
            var_map[vid] = ("fixed", lo[vid])
        elif shift[vid]:
            var_map[vid] = ("shift", len(cols), lo[vid])
            cols.append(vid)
            signs.append(1.0)
        elif neg[vid]:
            var_map[vid] = ("neg", len(cols), hi[vid])
            cols.append(vid)
            signs.append(-1.0)
        else:
            var_map[vid] = ("split", len(cols), len(cols) + 1)
            cols.append(vid)
            signs.append(1.0)
            cols.append(vid)
            signs.append(-1.0)

    col_idx = np.array(cols, dtype=np.intp)
    sign_arr = np.array(signs)
    n_struct = len(cols)

    rows = A_all[:, col_idx] * sign_arr if len(A_all) else \
        np.zeros((0, n_struct))
    rhs = rhs_all - A_all @ offset if len(A_all) else rhs_all.copy()
    senses = senses_all.copy()

    # unsatisfiable bound pairs become an impossible empty equality row
    n_bad = int(bad.sum())
    if n_bad:
        rows = np.vstack([rows, np.zeros((n_bad, n_struct))])
        rhs = np.concatenate([rhs, np.ones(n_bad)])
        senses = np.concatenate([senses, np.zeros(n_bad, dtype=np.int8)])

    n_constraint_rows = len(rows)

    # explicit upper-bound rows on shifted columns
    ub_col = []
    ub_val = []
    for vid in range(n_vars):
        if shift[vid] and hi[vid] < INF:
            ub_col.append(var_map[vid][1])
            ub_val.append(hi[vid] - lo[vid])
    if drop_redundant_upper_bounds and ub_col:
        # A bound x_j <= u is implied by a row  sum a_i x_i {<=,=} r  when
        # every a_i >= 0, a_j >= 1 and 0 <= r <= u (all x_i >= 0 here).
        cover_r = np.full(n_struct, np.inf)
        if len(rows):
            nonneg = ~(rows < -1e-12).any(axis=1)
            ok = nonneg & (senses <= 0) & (rhs >= 0)
            if ok.any():
                covered = rows[ok] >= 1.0 - 1e-12
                cover_r = np.where(covered, rhs[ok, None], np.inf).min(axis=0)
        keep = [t for t in range(len(ub_col))
                if not cover_r[ub_col[t]] <= ub_val[t] + 1e-12]
        ub_col = [ub_col[t] for t in keep]
        ub_val = [ub_val[t] for t in keep]
    n_bound_rows = len(ub_col)
    if n_bound_rows:
        bound_rows = np.zeros((n_bound_rows, n_struct))
        bound_rows[np.arange(n_bound_rows), ub_col] = 1.0
        rows = np.vstack([rows, bound_rows])
        rhs = np.concatenate([rhs, np.array(ub_val, dtype=float)])
        senses = np.concatenate([senses,
                                 np.full(n_bound_rows, -1, dtype=np.int8)])

    # objective over structural columns, as minimization
    obj_offset = obj_const + float(obj_vec @ offset)
    c_struct = obj_vec[col_idx] * sign_arr
    if maximize:
        c_struct = -c_struct

    # normalize rhs >= 0, then add slack / surplus / artificial columns
    m_rows = len(rows)
    flip = rhs < 0
    if flip.any():
        rows[flip] *= -1.0
        rhs[flip] *= -1.0
        senses[flip] = -senses[flip]

    col_kinds = [COL_STRUCTURAL] * n_struct
    extra_entries = []  # (row, col offset, value)
    basis = [-1] * m_rows
    for i in range(m_rows):
        is_bound = i >= n_constraint_rows
        slack_kind = COL_BOUND_SLACK if is_bound else COL_SLACK
        if senses[i] == -1:  # <=
            col = len(col_kinds)
            col_kinds.append(slack_kind)
            extra_entries.append((i, col, 1.0))
            basis[i] = col
        elif senses[i] == 1:  # >=
            col = len(col_kinds)
            col_kinds.append(slack_kind)
            extra_entries.append((i, col, -1.0))
            art = len(col_kinds)
            col_kinds.append(COL_ARTIFICIAL)
            extra_entries.append((i, art, 1.0))
            basis[i] = art
        else:  # =
            art = len(col_kinds)
            col_kinds.append(COL_ARTIFICIAL)
            extra_entries.append((i, art, 1.0))
            basis[i] = art

    n_total = len(col_kinds)
    A = np.zeros((m_rows, n_total))
    A[:, :n_struct] = rows
    for i, col, value in extra_entries:
        A[i, col] = value
    c_full = np.zeros(n_total)
    c_full[:n_struct] = c_struct

    return StandardForm(A=A, b=rhs, c=c_full, basis=basis,
                        var_map=var_map, col_kinds=col_kinds,
                        n_constraint_rows=n_constraint_rows,
                        n_bound_rows=n_bound_rows,
                        obj_offset=obj_offset, maximize=maximize)


# ---------------------------------------------------------------------------
# pivot loop


def _pivot_loop(T, basis, cost_row, n, allowed, iteration_limit,
                bland_threshold, trace, iterations0, streak0, bland0):
    """Tableau pivoting with the cost row at T[cost_row] kept reduced.

    T carries the constraint rows 0..m-1, then one or two cost rows; every
    cost row is updated by the elimination step, so entering-column pricing
    is a single row scan. Reference implementation; numba compiles
    _pivot_loop_jit below.
    """
    m = basis.shape[0]
    iterations = iterations0
    streak = streak0
    bland = bland0
    n_trace = 0
    ties = np.empty(m, np.int64)  # ratio-test tie-set work array
    while True:
        if trace is not None and n_trace < len(trace):
            trace[n_trace] = -T[cost_row, n]
            n_trace += 1
        entering = -1
        if bland:
            for j in range(n):
                if allowed[j] and T[cost_row, j] < -REDUCED_COST_TOL:
                    entering = j
                    break
        else:
            best = -REDUCED_COST_TOL
            for j in range(n):
                if allowed[j] and T[cost_row, j] < best:
                    best = T[cost_row, j]
                    entering = j
        if entering < 0:
            return _STATUS_OPTIMAL, iterations, n_trace, streak, bland
        if iterations >= iteration_limit:
            return _STATUS_ITER_LIMIT, iterations, n_trace, streak, bland
        # Ratio test. Pivot eligibility prefers comfortably large elements
        # (1e-7) and falls back to the 1e-10 floor only when no row
        # qualifies: dividing by near-floor pivots amplifies roundoff
        # catastrophically. Degenerate ties (ratios equal within a small
        # window) are resolved lexicographically — among the tied rows,
        # compare the a-scaled rows column by column — which both prevents
        # cycling and never lets a non-minimal row leave by more than the
        # noise window.
        best_ratio = np.inf
        pivot_floor = 1e-7
        n_tie = 0
        for _pass in range(2):
            for i in range(m):
                a = T[i, entering]
                if a > pivot_floor:
                    bi = T[i, n]
                    if bi < 0.0:  # roundoff infeasibility, treat as zero
                        bi = 0.0
                    ratio = bi / a
                    if ratio < best_ratio:
                        best_ratio = ratio
            if best_ratio < np.inf:
                eps = 1e-9 * (1.0 + best_ratio)
                for i in range(m):
                    a = T[i, entering]
                    if a > pivot_floor:
                        bi = T[i, n]
                        if bi < 0.0:
                            bi = 0.0
                        if bi / a <= best_ratio + eps:
                            ties[n_tie] = i
                            n_tie += 1
                break
            pivot_floor = PIVOT_TOL
        if n_tie == 0:
            return _STATUS_UNBOUNDED, iterations, n_trace, streak, bland
        for j in range(n):
            if n_tie == 1:
                break
            best_v = np.inf
            for k in range(n_tie):
                v = T[ties[k], j] / T[ties[k], entering]
                if v < best_v:
                    best_v = v
            tol = 1e-9 * (1.0 + abs(best_v))
            kept = 0
            for k in range(n_tie):
                v = T[ties[k], j] / T[ties[k], entering]
                if v <= best_v + tol:
                    ties[kept] = ties[k]
                    kept += 1
            n_tie = kept
        leave = ties[0]
        for k in range(1, n_tie):  # identical scaled rows: smallest index
            if basis[ties[k]] < basis[leave]:
                leave = ties[k]
        if best_ratio < 1e-9:
            streak += 1
            if streak > bland_threshold:
                bland = True
        else:
            streak = 0
        # pivot (cost rows included in the elimination)
        piv = T[leave, entering]
        T[leave] /= piv
        for i in range(T.shape[0]):
            if i != leave:
                f = T[i, entering]
                if f != 0.0:
                    T[i] -= f * T[leave]
        T[:, entering] = 0.0
        T[leave, entering] = 1.0
        basis[leave] = entering
        iterations += 1


try:  # pragma: no cover - exercised indirectly
    import numba

    _pivot_loop_jit = numba.njit(cache=True)(_pivot_loop)
except Exception:  # pragma: no cover
    _pivot_loop_jit = None

#: Pivots between tableau refactorizations from the original data; long
#: degenerate runs otherwise accumulate enough roundoff to flip the
#: phase-1 verdict.
REFRESH_INTERVAL = 1000

#: Below this many pivots since the last refactorization the accumulated
#: error is far under the solver tolerances, so the terminal
#: refactorization is skipped (it would dominate run time on small LPs).
REFRESH_MIN_PIVOTS = 100


def _refresh(T, basis, A0, b0, costs) -> bool:
    """Recompute the tableau (and reduced cost rows) from the original
    constraint data for the current basis, clearing accumulated error."""
    m = basis.shape[0]
    n = A0.shape[1]
    try:
        sol = np.linalg.solve(A0[:, basis], np.column_stack([A0, b0]))
    except np.linalg.LinAlgError:
        return False
    T[:m, :n] = sol[:, :n]
    T[:m, n] = sol[:, n]
    for row, c in costs:
        cb = c[basis]
        T[row, :n] = c - cb @ sol[:, :n]
        T[row, n] = -float(cb @ sol[:, n])
    return True


def _run_phase(T, basis, cost_row, n, allowed, iteration_limit, iterations0,
               A0, b0, costs, trace_arr=None):
    """Drive _pivot_loop in REFRESH_INTERVAL chunks with refactorization
    between chunks and before accepting a terminal verdict."""
    bland_threshold = 3 * (basis.shape[0] + n)
    loop = _pivot_loop_jit if _pivot_loop_jit is not None else _pivot_loop
    iterations = iterations0
    streak = 0
    bland = False
    n_trace = 0
    since_refresh = 0
    while True:
        cap = min(iterations + REFRESH_INTERVAL - since_refresh,
                  iteration_limit)
        tr = trace_arr[n_trace:] if trace_arr is not None else None
        before = iterations
        status, iterations, ntr, streak, bland = loop(
            T, basis, cost_row, n, allowed, cap, bland_threshold, tr,
            iterations, streak, bland)
        n_trace += ntr
        since_refresh += iterations - before
        if status == _STATUS_ITER_LIMIT and iterations < iteration_limit:
            _refresh(T, basis, A0, b0, costs)
            since_refresh = 0
            if iterations - iterations0 > 10 * (basis.shape[0] + n):
                # Degenerate wandering that dodges the streak counter;
                # force the Bland switch for the rest of the phase.
                bland = True
            continue
        if (status == _STATUS_OPTIMAL and since_refresh >= REFRESH_MIN_PIVOTS
                and _refresh(T, basis, A0, b0, costs)):
            since_refresh = 0
            red = T[cost_row, :n]
            if bool(np.any(allowed & (red < -REDUCED_COST_TOL))):
                continue  # roundoff had hidden an improving column
        return status, iterations, n_trace


def solve_standard_form(sf: StandardForm,
                        iteration_limit: int = DEFAULT_ITERATION_LIMIT,
                        trace: Optional[list] = None) -> LpResult:
    """Run phase 1 (drive out artificials) then phase 2 on a StandardForm."""
    m, n = sf.A.shape
    basis = np.array(sf.basis, dtype=np.int64)
    artificial = np.array([k == COL_ARTIFICIAL for k in sf.col_kinds])
    iterations = 0
    has_artificial = bool(artificial.any())

    # Rows 0..m-1: constraints. Row m: phase-2 cost. Row m+1: phase-1 cost.
    n_cost_rows = 2 if has_artificial else 1
    T = np.zeros((m + n_cost_rows, n + 1))
    T[:m, :n] = sf.A
    T[:m, n] = sf.b
    T[m, :n] = sf.c  # initial basis has zero phase-2 cost (slacks/artificials)
    phase2_row = m

    if has_artificial:
        # Phase-1 reduced cost row: artificial basics have unit cost.
        art_rows = artificial[basis]
        T[m + 1, :n] = artificial[:n].astype(np.float64)
        if art_rows.any():
            T[m + 1, :n] -= sf.A[art_rows].sum(axis=0)
            T[m + 1, n] = -float(sf.b[art_rows].sum())
        allowed = np.ones(n, dtype=np.bool_)
        costs1 = [(m, sf.c), (m + 1, artificial.astype(np.float64))]
        status, iterations, _ = _run_phase(T, basis, m + 1, n, allowed,
                                           iteration_limit, iterations,
                                           sf.A, sf.b, costs1)
        if status == _STATUS_ITER_LIMIT:
            raise IterationLimitExceeded(f"exceeded {iteration_limit} pivots")
        phase1 = -T[m + 1, n]
        if phase1 > FEAS_TOL:
            return LpResult(LpStatus.INFEASIBLE, iterations=iterations)
        # Pivot leftover artificials out of the basis; drop redundant rows.
        keep = np.ones(m + n_cost_rows, dtype=bool)
        nonart = ~artificial
        for i in range(m):
            if not artificial[basis[i]]:
                continue
            row = T[i, :n]
            cand = np.nonzero((np.abs(row) > FEAS_TOL) & nonart)[0]
            if len(cand):
                col = int(cand[0])
                piv = T[i, col]
                T[i] /= piv
                f = T[:, col].copy()
                f[i] = 0.0
                T -= np.outer(f, T[i])
                T[:, col] = 0.0
                T[i, col] = 1.0
                basis[i] = col
                iterations += 1
            else:
                keep[i] = False
        A0, b0 = sf.A, sf.b
        if not keep.all():
            T = T[keep]
            basis = basis[keep[:m]]
            A0 = sf.A[keep[:m]]
            b0 = sf.b[keep[:m]]
            m = basis.shape[0]
            phase2_row = m
        allowed = ~artificial
    else:
        A0, b0 = sf.A, sf.b
        allowed = np.ones(n, dtype=np.bool_)

    trace_arr = None
    if trace is not None:
        trace_arr = np.empty(min(iteration_limit + 2, 1_000_000))
    status, iterations, n_trace = _run_phase(
        T, basis, phase2_row, n, allowed, iteration_limit, iterations,
        A0, b0, [(phase2_row, sf.c)], trace_arr)
    if trace is not None:
        vals = trace_arr[:n_trace]
        if sf.maximize:
            vals = -vals
        trace.extend((vals + sf.obj_offset).tolist())
    if status == _STATUS_ITER_LIMIT:
        raise IterationLimitExceeded(f"exceeded {iteration_limit} pivots")
    if status == _STATUS_UNBOUNDED:
        return LpResult(LpStatus.UNBOUNDED, iterations=iterations)

    x = np.zeros(n)
    x[basis] = T[:m, n]
    values: Dict[VarId, float] = {}
    for vid, mp in sf.var_map.items():
        if mp[0] == "fixed":
            values[vid] = float(mp[1])
        elif mp[0] == "shift":
            values[vid] = float(x[mp[1]] + mp[2])
        elif mp[0] == "neg":
            values[vid] = float(mp[2] - x[mp[1]])
        elif mp[0] == "split":
            values[vid] = float(x[mp[1]] - x[mp[2]])
    obj_value = float(sf.c @ x)
    if sf.maximize:
        obj_value = -obj_value
    obj_value += sf.obj_offset
    return LpResult(LpStatus.OPTIMAL, values=values, objective=obj_value,
                    iterations=iterations)


def solve_relaxation(model: Model, *,
                     var_bounds: Optional[Mapping[VarId, Tuple[float, float]]] = None,
                     extra_constraints: Sequence[Constraint] = (),
                     iteration_limit: int = DEFAULT_ITERATION_LIMIT,
                     drop_redundant_upper_bounds: bool = True,
                     trace: Optional[list] = None) -> LpResult:
    """Solve the LP relaxation of a model (integrality ignored)."""
    sf = to_standard_form(model, var_bounds=var_bounds,
                          extra_constraints=extra_constraints,
                          drop_redundant_upper_bounds=drop_redundant_upper_bounds)
    return solve_standard_form(sf, iteration_limit=iteration_limit,
                               trace=trace)
