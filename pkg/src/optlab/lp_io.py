"""Writer and parser for a subset of the CPLEX LP text format.

The writer is byte-deterministic; the parser accepts the writer's output
plus whitespace-normalized variants, comments (``\\`` to end of line) and
scientific notation on numbers.
"""

from __future__ import annotations

import math
import re
from typing import Dict, List, Optional, Tuple

from .model import (INF, LinExpr, Model, ModelError, ObjSense, Sense, VarKind)

_SECTION_WORDS = {"Subject", "Bounds", "Generals", "Binaries", "End",
                  "Maximize", "Minimize"}


class LpSyntaxError(ModelError):
    """Parse failure with position and expectation information."""

    def __init__(self, line: int, column: int, expected: str, found: str = ""):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        where = f"line {line}, column {column}"
        msg = f"{where}: expected {expected}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)


class UnknownSection(ModelError):
    pass


class DuplicateConstraintName(ModelError):
    pass


# ---------------------------------------------------------------------------
# writing


def _fmt_number(x: float) -> str:
    """Shortest decimal form; integers print without a fractional part."""
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    s = repr(x)
    if "e" in s or "E" in s:
        s = format(x, ".20f").rstrip("0").rstrip(".")
    return s


def _fmt_expr(expr: LinExpr, var_names: List[str]) -> str:
    parts = []
    for vid in sorted(expr.terms):
        coeff = expr.terms[vid]
        sign = "+" if coeff >= 0 else "-"
        mag = abs(coeff)
        if mag == 1.0:
            parts.append(f"{sign} {var_names[vid]}")
        else:
            parts.append(f"{sign} {_fmt_number(mag)} {var_names[vid]}")
    if expr.constant != 0.0:
        sign = "+" if expr.constant >= 0 else "-"
        parts.append(f"{sign} {_fmt_number(abs(expr.constant))}")
    if not parts:
        return "0"
    return " ".join(parts)


def write_lp(model: Model) -> str:
    """Serialize a model to LP text. Deterministic: equal models, equal bytes."""
    names = [v.name for v in model.variables]
    sense, obj = model.objective
    lines = [f"\\ Problem: {model.name}"]
    lines.append("Maximize" if sense is ObjSense.MAXIMIZE else "Minimize")
    lines.append(f"obj: {_fmt_expr(obj, names)}")
    lines.append("Subject To")
    for con in model.constraints:
        lines.append(f"{con.name}: {_fmt_expr(con.expr, names)} "
                     f"{con.sense.value} {_fmt_number(con.rhs)}")

    bound_lines = []
    generals = []
    binaries = []
    for var in model.variables:
        if var.kind is VarKind.BINARY:
            binaries.append(var.name)
            continue
        if var.kind is VarKind.INTEGER:
            generals.append(var.name)
        if var.lower == 0.0 and var.upper == INF:
            continue  # default bounds, no line
        if var.lower == -INF and var.upper == INF:
            bound_lines.append(f"{var.name} free")
        elif var.upper == INF:
            bound_lines.append(f"{var.name} >= {_fmt_number(var.lower)}")
        elif var.lower == 0.0:
            bound_lines.append(f"{var.name} <= {_fmt_number(var.upper)}")
        else:
            bound_lines.append(f"{_fmt_number(var.lower)} <= {var.name} "
                               f"<= {_fmt_number(var.upper)}")
    if bound_lines:
        lines.append("Bounds")
        lines.extend(bound_lines)
    if generals:
        lines.append("Generals")
        lines.extend(generals)
    if binaries:
        lines.append("Binaries")
        lines.extend(binaries)
    lines.append("End")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<comment>\\[^\n]*)"
    r"|(?P<num>(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op><=|>=|=|:|\+|-)"
)


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str):
    tokens = []
    first_comment = None
    pos, line, linestart = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise LpSyntaxError(line, pos - linestart + 1, "a token",
                                text[pos])
        kind = m.lastgroup
        value = m.group()
        if kind == "ws":
            line += value.count("\n")
            if "\n" in value:
                linestart = m.end() - (len(value) - value.rfind("\n") - 1)
        elif kind == "comment":
            if first_comment is None:
                first_comment = value
        elif kind == "num" and m.lastindex:
            tokens.append(_Token("num", value, line, m.start() - linestart + 1))
        else:
            tokens.append(_Token(kind, value, line, m.start() - linestart + 1))
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - linestart + 1))
    return tokens, first_comment


class _Parser:
    def __init__(self, text: str):
        self.tokens, self.first_comment = _tokenize(text)
        self.i = 0
        self.var_order: List[str] = []
        self.var_seen: Dict[str, int] = {}
        self.bounds: Dict[str, Tuple[float, float]] = {}
        self.kinds: Dict[str, VarKind] = {}

    # token helpers

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, text: Optional[str] = None,
               what: Optional[str] = None) -> _Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            raise LpSyntaxError(t.line, t.col, what or text or kind, t.text)
        return self.next()

    def at_section_word(self) -> bool:
        t = self.peek()
        return t.kind == "name" and t.text in _SECTION_WORDS

    # grammar

    def intern_var(self, name: str) -> None:
        if name not in self.var_seen:
            self.var_seen[name] = len(self.var_order)
            self.var_order.append(name)

    def parse_signed_number(self) -> float:
        sign = 1.0
        t = self.peek()
        while t.kind == "op" and t.text in "+-":
            if t.text == "-":
                sign = -sign
            self.next()
            t = self.peek()
        if t.kind == "num":
            return sign * float(self.next().text)
        if t.kind == "name" and t.text == "inf":
            self.next()
            return sign * INF
        raise LpSyntaxError(t.line, t.col, "a number", t.text)

    def parse_expr(self, interner) -> LinExpr:
        """Terms until a relation, section word, or eof."""
        expr = LinExpr()
        first = True
        while True:
            t = self.peek()
            if t.kind == "eof" or self.at_section_word():
                break
            if t.kind == "op" and t.text in ("<=", ">=", "="):
                break
            sign = 1.0
            while t.kind == "op" and t.text in "+-":
                if t.text == "-":
                    sign = -sign
                self.next()
                t = self.peek()
            if t.kind == "num":
                mag = float(self.next().text)
                t = self.peek()
                if t.kind == "name" and t.text not in _SECTION_WORDS:
                    name = self.next().text
                    interner(name)
                    expr.add_term(self.var_seen[name], sign * mag)
                else:
                    expr.constant += sign * mag
            elif t.kind == "name" and t.text not in _SECTION_WORDS:
                name = self.next().text
                interner(name)
                expr.add_term(self.var_seen[name], sign)
            else:
                if first:
                    raise LpSyntaxError(t.line, t.col, "a term", t.text)
                raise LpSyntaxError(t.line, t.col, "a term after sign",
                                    t.text)
            first = False
        return expr

    def parse(self) -> Model:
        t = self.peek()
        if not (t.kind == "name" and t.text in ("Maximize", "Minimize")):
            raise LpSyntaxError(t.line, t.col, "'Maximize' or 'Minimize'",
                                t.text)
        sense = (ObjSense.MAXIMIZE if self.next().text == "Maximize"
                 else ObjSense.MINIMIZE)

        self.expect("name", what="objective label")
        self.expect("op", ":", "':' after objective label")
        obj = self.parse_expr(self.intern_var)

        self.expect("name", "Subject", "'Subject To'")
        self.expect("name", "To", "'Subject To'")

        constraints = []
        con_names = set()
        while not self.at_section_word():
            t = self.peek()
            if t.kind == "eof":
                raise LpSyntaxError(t.line, t.col, "'End'", "end of input")
            name_tok = self.expect("name", what="constraint name")
            self.expect("op", ":", "':' after constraint name")
            expr = self.parse_expr(self.intern_var)
            rel = self.peek()
            if not (rel.kind == "op" and rel.text in ("<=", ">=", "=")):
                raise LpSyntaxError(rel.line, rel.col, "a relation",
                                    rel.text)
            self.next()
            rhs = self.parse_signed_number()
            if name_tok.text in con_names:
                raise DuplicateConstraintName(name_tok.text)
            con_names.add(name_tok.text)
            sense_map = {"<=": Sense.LE, ">=": Sense.GE, "=": Sense.EQ}
            constraints.append((name_tok.text, expr, sense_map[rel.text], rhs))

        while self.at_section_word() and self.peek().text != "End":
            section = self.next().text
            if section == "Bounds":
                self.parse_bounds()
            elif section == "Generals":
                self.parse_var_list(VarKind.INTEGER)
            elif section == "Binaries":
                self.parse_var_list(VarKind.BINARY)
            else:
                t = self.tokens[self.i - 1]
                raise UnknownSection(
                    f"line {t.line}: unexpected section {section!r}")
        t = self.peek()
        if not (t.kind == "name" and t.text == "End"):
            raise LpSyntaxError(t.line, t.col, "'End'", t.text or "end of input")
        self.next()
        t = self.peek()
        if t.kind != "eof":
            raise LpSyntaxError(t.line, t.col, "end of input", t.text)

        return self.build_model(sense, obj, constraints)

    def parse_bounds(self) -> None:
        while not self.at_section_word():
            t = self.peek()
            if t.kind == "eof":
                raise LpSyntaxError(t.line, t.col, "'End'", "end of input")
            if t.kind == "name" and t.text != "inf":
                name = self.next().text
                self.intern_var(name)
                nxt = self.peek()
                if nxt.kind == "name" and nxt.text == "free":
                    self.next()
                    self.bounds[name] = (-INF, INF)
                    continue
                if nxt.kind == "op" and nxt.text in ("<=", ">="):
                    op = self.next().text
                    val = self.parse_signed_number()
                    lo, hi = self.bounds.get(name, (0.0, INF))
                    if op == "<=":
                        self.bounds[name] = (lo, val)
                    else:
                        self.bounds[name] = (val, hi)
                    continue
                raise LpSyntaxError(nxt.line, nxt.col,
                                    "'free' or a relation", nxt.text)
            # form: l <= v <= u
            lo = self.parse_signed_number()
            self.expect("op", "<=", "'<='")
            name = self.expect("name", what="variable name").text
            self.intern_var(name)
            self.expect("op", "<=", "'<='")
            hi = self.parse_signed_number()
            self.bounds[name] = (lo, hi)

    def parse_var_list(self, kind: VarKind) -> None:
        while True:
            t = self.peek()
            if t.kind != "name" or t.text in _SECTION_WORDS:
                return
            name = self.next().text
            self.intern_var(name)
            self.kinds[name] = kind

    def build_model(self, sense, obj, constraints) -> Model:
        model = Model()
        if self.first_comment:
            m = re.match(r"\\ Problem: (.*)\Z", self.first_comment)
            if m:
                model.name = m.group(1)
        for name in self.var_order:
            kind = self.kinds.get(name, VarKind.CONTINUOUS)
            if kind is VarKind.BINARY:
                model.add_variable(name, 0.0, 1.0, kind)
            else:
                lo, hi = self.bounds.get(name, (0.0, INF))
                model.add_variable(name, lo, hi, kind)
        model.set_objective(sense, obj)
        for name, expr, con_sense, rhs in constraints:
            model.add_constraint(name, expr, con_sense, rhs)
        return model


def parse_lp(text: str) -> Model:
    """Parse LP text into a Model; variable ids follow first appearance."""
    return _Parser(text).parse()
