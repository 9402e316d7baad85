"""Exact cover of a rectangular room by square tiles, minimizing tile count."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from ..model import InvalidSize, LinExpr, Model, ObjSense, Sense
from ..branch_and_bound import Solution

Placement = Tuple[int, int, int]  # (size, top_row, left_col), 0-based anchor


@dataclass
class TilingInstance:
    rows: int
    cols: int
    sizes: List[int]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise InvalidSize("room dimensions must be positive")
        for a in self.sizes:
            if a < 1 or a > min(self.rows, self.cols):
                raise InvalidSize(f"tile size {a} does not fit the room")

    def placements(self) -> List[Placement]:
        out = []
        for a in self.sizes:
            for r in range(self.rows - a + 1):
                for c in range(self.cols - a + 1):
                    out.append((a, r, c))
        return out


def build_tiling(instance: TilingInstance) -> Model:
    """One binary per placement; every cell covered exactly once; min tiles."""
    model = Model(f"tiling_{instance.rows}x{instance.cols}")
    placements = instance.placements()
    ids = [model.add_binary(f"t_{a}_{r}_{c}") for a, r, c in placements]
    model.set_objective(ObjSense.MINIMIZE, LinExpr.sum_of(ids))
    covering = [[LinExpr() for _ in range(instance.cols)]
                for _ in range(instance.rows)]
    for vid, (a, r, c) in zip(ids, placements):
        for i in range(r, r + a):
            for j in range(c, c + a):
                covering[i][j].add_term(vid, 1.0)
    for i in range(instance.rows):
        for j in range(instance.cols):
            model.add_constraint(f"cell_{i}_{j}", covering[i][j], Sense.EQ, 1)
    return model


def decode_tiling(instance: TilingInstance, solution: Solution) -> List[Placement]:
    placements = instance.placements()
    return [placements[k] for k in range(len(placements))
            if round(solution.values[k]) == 1]


def is_exact_cover(instance: TilingInstance, tiles: List[Placement]) -> bool:
    """Every cell covered exactly once and every tile inside the room."""
    count = [[0] * instance.cols for _ in range(instance.rows)]
    for a, r, c in tiles:
        if r < 0 or c < 0 or r + a > instance.rows or c + a > instance.cols:
            return False
        for i in range(r, r + a):
            for j in range(c, c + a):
                count[i][j] += 1
    return all(count[i][j] == 1 for i in range(instance.rows)
               for j in range(instance.cols))


def parse_sizes(spec: str) -> List[int]:
    """Size list syntax: comma-separated entries, each `a` or `a..b`."""
    sizes: List[int] = []
    for part in spec.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            sizes.extend(range(int(lo), int(hi) + 1))
        else:
            sizes.append(int(part))
    return sizes
