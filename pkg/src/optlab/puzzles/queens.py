"""Non-attacking queens: maximization model, blocking variant, decoding."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Set, Tuple

from ..model import InvalidSize, LinExpr, Model, ObjSense, Sense
from ..branch_and_bound import Solution


@dataclass
class QueensBoard:
    n: int
    queens: Set[Tuple[int, int]]  # (row, col), 1-based

    def render(self) -> str:
        lines = []
        for i in range(1, self.n + 1):
            lines.append(" ".join(
                "Q" if (i, j) in self.queens else "."
                for j in range(1, self.n + 1)))
        return "\n".join(lines)


def _cell_name(i: int, j: int) -> str:
    return f"x_{i}_{j}"


def _line_constraints(model: Model, ids: Dict[Tuple[int, int], int], n: int,
                      drop_trivial_diagonals: bool) -> None:
    for i in range(1, n + 1):
        model.add_constraint(f"row_{i}",
                             LinExpr.sum_of(ids[i, j] for j in range(1, n + 1)),
                             Sense.LE, 1)
    for j in range(1, n + 1):
        model.add_constraint(f"col_{j}",
                             LinExpr.sum_of(ids[i, j] for i in range(1, n + 1)),
                             Sense.LE, 1)
    # Up-diagonals share the index sum i+j, down-diagonals the difference i-j.
    for k in range(2, 2 * n + 1):
        cells = [(i, k - i) for i in range(1, n + 1) if 1 <= k - i <= n]
        if drop_trivial_diagonals and len(cells) < 2:
            continue
        model.add_constraint(f"diag_up_{k}",
                             LinExpr.sum_of(ids[c] for c in cells),
                             Sense.LE, 1)
    for k in range(-(n - 1), n):
        cells = [(i, i - k) for i in range(1, n + 1) if 1 <= i - k <= n]
        if drop_trivial_diagonals and len(cells) < 2:
            continue
        name = f"diag_down_m{-k}" if k < 0 else f"diag_down_{k}"
        model.add_constraint(name,
                             LinExpr.sum_of(ids[c] for c in cells),
                             Sense.LE, 1)


def build_queens(n: int, drop_trivial_diagonals: bool = False) -> Model:
    """Maximize the number of pairwise non-attacking queens on an n x n board.

    One binary per cell; each row, column and diagonal may carry at most one
    queen. All 2*(2n-1) diagonal constraints are emitted by default (46
    constraints in total for n = 8); `drop_trivial_diagonals` removes the
    length-1 corner diagonals, which binary bounds already cover.
    """
    if n < 1:
        raise InvalidSize(f"board size must be >= 1, got {n}")
    model = Model(f"queens_{n}")
    ids = {(i, j): model.add_binary(_cell_name(i, j))
           for i in range(1, n + 1) for j in range(1, n + 1)}
    model.set_objective(ObjSense.MAXIMIZE, LinExpr.sum_of(ids.values()))
    _line_constraints(model, ids, n, drop_trivial_diagonals)
    return model


def _attacked_cells(i: int, j: int, n: int):
    for k in range(1, n + 1):
        if k != j:
            yield (i, k)
        if k != i:
            yield (k, j)
    for di in (-1, 1):
        for dj in (-1, 1):
            r, c = i + di, j + dj
            while 1 <= r <= n and 1 <= c <= n:
                yield (r, c)
                r += di
                c += dj


def build_queens_blocking(n: int) -> Model:
    """Fewest non-attacking queens leaving no free cell for another queen.

    On top of the at-most-one line constraints, every cell must be occupied
    or attacked by some queen, so nothing can be added; minimize the count.
    """
    if n < 1:
        raise InvalidSize(f"board size must be >= 1, got {n}")
    model = Model(f"queens_block_{n}")
    ids = {(i, j): model.add_binary(_cell_name(i, j))
           for i in range(1, n + 1) for j in range(1, n + 1)}
    model.set_objective(ObjSense.MINIMIZE, LinExpr.sum_of(ids.values()))
    _line_constraints(model, ids, n, drop_trivial_diagonals=False)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            expr = LinExpr({ids[i, j]: 1.0})
            for cell in set(_attacked_cells(i, j, n)):
                expr.add_term(ids[cell], 1.0)
            model.add_constraint(f"cover_{i}_{j}", expr, Sense.GE, 1)
    return model


def decode_queens(model: Model, solution: Solution) -> QueensBoard:
    queens = set()
    n = 0
    for vid, var in enumerate(model.variables):
        _, i, j = var.name.split("_")
        i, j = int(i), int(j)
        n = max(n, i, j)
        if round(solution.values[vid]) == 1:
            queens.add((i, j))
    return QueensBoard(n, queens)


def is_non_attacking(board: QueensBoard) -> bool:
    """Model-independent rule check: no two queens share a line."""
    qs = list(board.queens)
    for a in range(len(qs)):
        for b in range(a + 1, len(qs)):
            (r1, c1), (r2, c2) = qs[a], qs[b]
            if r1 == r2 or c1 == c2 or abs(r1 - r2) == abs(c1 - c2):
                return False
    return True


def is_blocking(board: QueensBoard) -> bool:
    """True if no additional non-attacking queen fits anywhere."""
    if not is_non_attacking(board):
        return False
    for i in range(1, board.n + 1):
        for j in range(1, board.n + 1):
            if (i, j) in board.queens:
                continue
            candidate = QueensBoard(board.n, board.queens | {(i, j)})
            if is_non_attacking(candidate):
                return False
    return True
