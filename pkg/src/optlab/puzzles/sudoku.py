"""Sudoku as a 3-index binary feasibility model, with a uniqueness check."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from ..model import InvalidSize, LinExpr, Model, Sense, VarKind
from ..branch_and_bound import SolStatus, Solution, SolveConfig, solve


@dataclass
class SudokuGrid:
    """9x9 grid of values 0..9; 0 marks a blank cell."""

    cells: List[List[int]]

    def __post_init__(self):
        if len(self.cells) != 9 or any(len(row) != 9 for row in self.cells):
            raise InvalidSize("grid must be 9x9")
        for row in self.cells:
            for value in row:
                if not 0 <= value <= 9:
                    raise InvalidSize(f"cell value {value} out of range")

    def render(self) -> str:
        return "\n".join(
            "".join(str(v) if v else "." for v in row) for row in self.cells)

    def transpose(self) -> "SudokuGrid":
        return SudokuGrid([[self.cells[c][r] for c in range(9)]
                           for r in range(9)])


class Uniqueness(Enum):
    UNIQUE = "unique"
    MULTIPLE = "multiple"
    INFEASIBLE = "infeasible"


@dataclass
class UniquenessResult:
    verdict: Uniqueness
    solution: Optional[SudokuGrid] = None
    second: Optional[SudokuGrid] = None


def _vid(r: int, c: int, v: int) -> int:
    # ids are dense in (row, col, value) construction order
    return (r * 9 + c) * 9 + (v - 1)


def build_sudoku(grid: SudokuGrid) -> Model:
    """One binary per (cell, value); exactly-one constraints per cell,
    row-value, column-value and block-value; givens pinned via bounds."""
    model = Model("sudoku")
    for r in range(9):
        for c in range(9):
            given = grid.cells[r][c]
            for v in range(1, 10):
                if given == v:
                    model.add_variable(f"x_{r}_{c}_{v}", 1.0, 1.0,
                                       VarKind.BINARY)
                else:
                    model.add_binary(f"x_{r}_{c}_{v}")
    for r in range(9):
        for c in range(9):
            model.add_constraint(
                f"cell_{r}_{c}",
                LinExpr.sum_of(_vid(r, c, v) for v in range(1, 10)),
                Sense.EQ, 1)
    for r in range(9):
        for v in range(1, 10):
            model.add_constraint(
                f"rowval_{r}_{v}",
                LinExpr.sum_of(_vid(r, c, v) for c in range(9)),
                Sense.EQ, 1)
    for c in range(9):
        for v in range(1, 10):
            model.add_constraint(
                f"colval_{c}_{v}",
                LinExpr.sum_of(_vid(r, c, v) for r in range(9)),
                Sense.EQ, 1)
    for b in range(9):
        rows = range(3 * (b // 3), 3 * (b // 3) + 3)
        cols = range(3 * (b % 3), 3 * (b % 3) + 3)
        for v in range(1, 10):
            model.add_constraint(
                f"blockval_{b}_{v}",
                LinExpr.sum_of(_vid(r, c, v) for r in rows for c in cols),
                Sense.EQ, 1)
    return model


def decode_sudoku(solution: Solution) -> SudokuGrid:
    cells = [[0] * 9 for _ in range(9)]
    for r in range(9):
        for c in range(9):
            for v in range(1, 10):
                if round(solution.values[_vid(r, c, v)]) == 1:
                    cells[r][c] = v
    return SudokuGrid(cells)


def solve_sudoku(grid: SudokuGrid,
                 config: Optional[SolveConfig] = None) -> Optional[SudokuGrid]:
    """A completed grid, or None if the givens admit no completion."""
    result = solve(build_sudoku(grid), config)
    if result.status is not SolStatus.OPTIMAL:
        return None
    return decode_sudoku(result)


def check_unique(grid: SudokuGrid,
                 config: Optional[SolveConfig] = None) -> UniquenessResult:
    """Solve once; then forbid the found completion with a no-good cut and
    re-solve. A second completion proves ambiguity; infeasibility proves
    uniqueness."""
    model = build_sudoku(grid)
    first = solve(model, config)
    if first.status is not SolStatus.OPTIMAL:
        return UniquenessResult(Uniqueness.INFEASIBLE)
    first_grid = decode_sudoku(first)
    ones = [vid for vid in range(model.num_vars)
            if round(first.values[vid]) == 1]
    model.add_constraint("exclude_first", LinExpr.sum_of(ones),
                         Sense.LE, len(ones) - 1)
    second = solve(model, config)
    if second.status is SolStatus.OPTIMAL:
        return UniquenessResult(Uniqueness.MULTIPLE, first_grid,
                                decode_sudoku(second))
    return UniquenessResult(Uniqueness.UNIQUE, first_grid)


def is_valid_complete(grid: SudokuGrid) -> bool:
    """All-different check over rows, columns and blocks of a full grid."""
    groups = []
    for r in range(9):
        groups.append([grid.cells[r][c] for c in range(9)])
    for c in range(9):
        groups.append([grid.cells[r][c] for r in range(9)])
    for b in range(9):
        groups.append([grid.cells[r][c]
                       for r in range(3 * (b // 3), 3 * (b // 3) + 3)
                       for c in range(3 * (b % 3), 3 * (b % 3) + 3)])
    return all(sorted(g) == list(range(1, 10)) for g in groups)


def respects_givens(full: SudokuGrid, puzzle: SudokuGrid) -> bool:
    return all(puzzle.cells[r][c] in (0, full.cells[r][c])
               for r in range(9) for c in range(9))


def parse_sudoku(text: str) -> SudokuGrid:
    """Nine lines of nine characters; digits 1-9, `.` or `0` for blanks."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != 9 or any(len(ln) != 9 for ln in lines):
        raise InvalidSize("expected 9 lines of 9 characters")
    cells = [[0 if ch in ".0" else int(ch) for ch in ln] for ln in lines]
    return SudokuGrid(cells)
