"""Core ILP objects: variables, sparse linear expressions, constraints, models."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

INF = math.inf

#: Default feasibility / integrality tolerance.
DEFAULT_TOL = 1e-6

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

VarId = int
ConstraintId = int


class ModelError(Exception):
    """Base class for model construction and evaluation errors."""


class DuplicateName(ModelError):
    pass


class InvalidBounds(ModelError):
    pass


class BadIdentifier(ModelError):
    pass


class UnknownVariable(ModelError):
    pass


class MissingValue(ModelError):
    pass


class InvalidSize(ModelError):
    """Raised by puzzle builders on nonsensical instance sizes."""


class VarKind(Enum):
    CONTINUOUS = "continuous"
    INTEGER = "integer"
    BINARY = "binary"


class Sense(Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class ObjSense(Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"


@dataclass(frozen=True)
class Variable:
    name: str
    lower: float
    upper: float
    kind: VarKind


class LinExpr:
    """Sparse linear expression: coefficient map over variable ids plus a constant.

    Zero coefficients are never stored; arithmetic keeps the map normalized.
    """

    __slots__ = ("terms", "constant")

    def __init__(self, terms: Optional[Mapping[VarId, float]] = None,
                 constant: float = 0.0):
        self.terms: Dict[VarId, float] = {}
        self.constant = float(constant)
        if terms:
            for v, c in terms.items():
                self.add_term(v, c)

    def add_term(self, var: VarId, coeff: float) -> "LinExpr":
        c = self.terms.get(var, 0.0) + float(coeff)
        if c == 0.0:
            self.terms.pop(var, None)
        else:
            self.terms[var] = c
        return self

    def copy(self) -> "LinExpr":
        e = LinExpr()
        e.terms = dict(self.terms)
        e.constant = self.constant
        return e

    def __add__(self, other):
        e = self.copy()
        if isinstance(other, LinExpr):
            for v, c in other.terms.items():
                e.add_term(v, c)
            e.constant += other.constant
        else:
            e.constant += float(other)
        return e

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * (other if isinstance(other, LinExpr)
                                else LinExpr(constant=other))

    def __mul__(self, scalar: float):
        e = LinExpr(constant=self.constant * scalar)
        if scalar != 0.0:
            for v, c in self.terms.items():
                e.terms[v] = c * scalar
        return e

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __eq__(self, other):
        return (isinstance(other, LinExpr)
                and self.terms == other.terms
                and self.constant == other.constant)

    def __repr__(self):
        return f"LinExpr({self.terms!r}, constant={self.constant!r})"

    @staticmethod
    def sum_of(vars: Iterable[VarId]) -> "LinExpr":
        e = LinExpr()
        for v in vars:
            e.add_term(v, 1.0)
        return e


@dataclass
class Constraint:
    name: str
    expr: LinExpr
    sense: Sense
    rhs: float

    def residual(self, assignment: Mapping[VarId, float]) -> float:
        """Violation amount: positive means the constraint is broken."""
        lhs = evaluate(self.expr, assignment)
        if self.sense is Sense.LE:
            return lhs - self.rhs
        if self.sense is Sense.GE:
            return self.rhs - lhs
        return abs(lhs - self.rhs)


def evaluate(expr: LinExpr, assignment: Mapping[VarId, float]) -> float:
    """Evaluate a linear expression under a variable assignment."""
    total = expr.constant
    for v, c in expr.terms.items():
        if v not in assignment:
            raise MissingValue(f"no value for variable id {v}")
        total += c * assignment[v]
    return total


class Model:
    """An ILP: variables with bounds and kinds, linear constraints, one objective."""

    def __init__(self, name: str = "model"):
        self.name = name
        self.variables: List[Variable] = []
        self.constraints: List[Constraint] = []
        self.objective: Tuple[ObjSense, LinExpr] = (ObjSense.MINIMIZE, LinExpr())
        self._var_index: Dict[str, VarId] = {}
        self._con_names: Dict[str, ConstraintId] = {}

    # -- construction -----------------------------------------------------

    def add_variable(self, name: str, lower: float = 0.0, upper: float = INF,
                     kind: VarKind = VarKind.CONTINUOUS) -> VarId:
        if not _NAME_RE.match(name):
            raise BadIdentifier(f"invalid variable name {name!r}")
        if name in self._var_index:
            raise DuplicateName(f"variable {name!r} already exists")
        if kind is VarKind.BINARY:
            if lower == 0.0 and upper == INF:
                lower, upper = 0.0, 1.0
            if not (0.0 <= lower <= upper <= 1.0):
                raise InvalidBounds(
                    f"binary variable {name!r} bounds must lie within [0, 1]")
        if lower > upper:
            raise InvalidBounds(f"{name!r}: lower {lower} > upper {upper}")
        vid = len(self.variables)
        self.variables.append(Variable(name, float(lower), float(upper), kind))
        self._var_index[name] = vid
        return vid

    def add_binary(self, name: str) -> VarId:
        return self.add_variable(name, 0.0, 1.0, VarKind.BINARY)

    def add_constraint(self, name: str, expr: LinExpr, sense: Sense,
                       rhs: float) -> ConstraintId:
        if not _NAME_RE.match(name):
            raise BadIdentifier(f"invalid constraint name {name!r}")
        if name in self._con_names:
            raise DuplicateName(f"constraint {name!r} already exists")
        for v in expr.terms:
            if not (0 <= v < len(self.variables)):
                raise UnknownVariable(f"constraint {name!r} uses unknown id {v}")
        stored = expr.copy()
        # Fold the expression constant into the right-hand side.
        stored_rhs = float(rhs) - stored.constant
        stored.constant = 0.0
        cid = len(self.constraints)
        self.constraints.append(Constraint(name, stored, sense, stored_rhs))
        self._con_names[name] = cid
        return cid

    def set_objective(self, sense: ObjSense, expr: LinExpr) -> None:
        for v in expr.terms:
            if not (0 <= v < len(self.variables)):
                raise UnknownVariable(f"objective uses unknown id {v}")
        self.objective = (sense, expr.copy())

    def var_id(self, name: str) -> VarId:
        try:
            return self._var_index[name]
        except KeyError:
            raise UnknownVariable(f"no variable named {name!r}") from None

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    # -- inspection -------------------------------------------------------

    def objective_value(self, assignment: Mapping[VarId, float]) -> float:
        return evaluate(self.objective[1], assignment)

    def check_feasible(self, assignment: Mapping[VarId, float],
                       tol: float = DEFAULT_TOL):
        """Check an assignment against all constraints, bounds and integrality.

        Returns (feasible, violated) where violated lists constraint names;
        bound and integrality violations are reported as "bound:NAME" and
        "integral:NAME".
        """
        violated = []
        for vid, var in enumerate(self.variables):
            if vid not in assignment:
                raise MissingValue(f"no value for variable {var.name!r}")
            x = assignment[vid]
            if x < var.lower - tol or x > var.upper + tol:
                violated.append(f"bound:{var.name}")
            if var.kind is not VarKind.CONTINUOUS:
                if abs(x - round(x)) > tol:
                    violated.append(f"integral:{var.name}")
        for con in self.constraints:
            if con.residual(assignment) > tol:
                violated.append(con.name)
        return (not violated, violated)

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return (self.name == other.name
                and self.variables == other.variables
                and self.constraints == other.constraints
                and self.objective == other.objective)

    def __repr__(self):
        return (f"Model({self.name!r}, {len(self.variables)} vars, "
                f"{len(self.constraints)} constraints)")
