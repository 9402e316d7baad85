"""Knight tours as Hamiltonian cycles on the knight-move graph."""

from __future__ import annotations

from typing import Dict, List, Tuple

from ..model import (Constraint, InvalidSize, LinExpr, Model, ObjSense, Sense,
                     VarId)
from ..branch_and_bound import LazyCutHandler, Solution
from .tsp import _DisjointSet

_MOVES = [(1, 2), (2, 1), (-1, 2), (-2, 1), (1, -2), (2, -1), (-1, -2), (-2, -1)]

#: Node index of the dummy city used for open tours.
DUMMY = -1


def _cells(n: int):
    return [(r, c) for r in range(n) for c in range(n)]


def knight_edges(n: int) -> List[Tuple[Tuple[int, int], Tuple[int, int]]]:
    edges = []
    for r, c in _cells(n):
        for dr, dc in _MOVES:
            r2, c2 = r + dr, c + dc
            if 0 <= r2 < n and 0 <= c2 < n and (r, c) < (r2, c2):
                edges.append(((r, c), (r2, c2)))
    return edges


def build_knight_tour(n: int, closed: bool = True) -> Tuple[Model, LazyCutHandler]:
    """Degree-2 cycle model over knight moves, lazy subtour cuts.

    Open tours reuse the cycle machinery: a zero-cost dummy node adjacent
    to every cell is added, and the cycle through it decodes to a path.
    """
    if n < 3:
        raise InvalidSize(f"board size must be >= 3, got {n}")
    model = Model(f"knight_{n}_{'closed' if closed else 'open'}")
    nodes: List[Tuple[int, int]] = _cells(n)
    if not closed:
        nodes = nodes + [(DUMMY, DUMMY)]
    index = {cell: k for k, cell in enumerate(nodes)}

    pairs: List[Tuple[int, int]] = []
    edge_var: Dict[Tuple[int, int], VarId] = {}
    for a, b in knight_edges(n):
        i, j = index[a], index[b]
        vid = model.add_binary(f"e_{i}_{j}")
        edge_var[i, j] = vid
        pairs.append((i, j))
    if not closed:
        d = index[DUMMY, DUMMY]
        for cell in _cells(n):
            i, j = sorted((index[cell], d))
            vid = model.add_binary(f"e_{i}_{j}")
            edge_var[i, j] = vid
            pairs.append((i, j))

    model.set_objective(ObjSense.MINIMIZE, LinExpr.sum_of(edge_var.values()))
    incident: List[LinExpr] = [LinExpr() for _ in nodes]
    for (i, j), vid in edge_var.items():
        incident[i].add_term(vid, 1.0)
        incident[j].add_term(vid, 1.0)
    for k in range(len(nodes)):
        model.add_constraint(f"degree_{k}", incident[k], Sense.EQ, 2)

    total = len(nodes)
    counter = [0]

    def subtour_cuts(candidate: Dict[VarId, float]) -> List[Constraint]:
        dsu = _DisjointSet(total)
        for (i, j), vid in edge_var.items():
            if round(candidate[vid]) == 1:
                dsu.union(i, j)
        components: Dict[int, List[int]] = {}
        for node in range(total):
            components.setdefault(dsu.find(node), []).append(node)
        cuts = []
        for members in components.values():
            if 1 < len(members) < total:
                mset = set(members)
                inside = LinExpr()
                for (i, j), vid in edge_var.items():
                    if i in mset and j in mset:
                        inside.add_term(vid, 1.0)
                counter[0] += 1
                cuts.append(Constraint(f"ksubtour_{counter[0]}", inside,
                                       Sense.LE, len(members) - 1))
        return cuts

    return model, subtour_cuts


def decode_knight_tour(model: Model, solution: Solution, n: int,
                       closed: bool = True) -> List[Tuple[int, int]]:
    """Cell sequence of the tour; open tours start after the dummy node."""
    adjacency: Dict[int, List[int]] = {}
    for vid, var in enumerate(model.variables):
        if round(solution.values[vid]) != 1:
            continue
        _, i, j = var.name.split("_")
        i, j = int(i), int(j)
        adjacency.setdefault(i, []).append(j)
        adjacency.setdefault(j, []).append(i)
    start = n * n if not closed else 0  # dummy has the last index
    order = [start]
    prev = None
    node = start
    while True:
        nxts = [k for k in adjacency.get(node, []) if k != prev]
        if not nxts:
            break
        prev, node = node, nxts[0]
        if node == start:
            break
        order.append(node)
    if not closed:
        order = order[1:]  # strip the dummy
    return [(k // n, k % n) for k in order]


def is_knight_tour(n: int, cells: List[Tuple[int, int]], closed: bool) -> bool:
    """Move-by-move validation: every cell once, consecutive knight moves."""
    if sorted(cells) != _cells(n):
        return False
    steps = list(zip(cells, cells[1:]))
    if closed:
        steps.append((cells[-1], cells[0]))
    return all((abs(a[0] - b[0]), abs(a[1] - b[1])) in ((1, 2), (2, 1))
               for a, b in steps)
