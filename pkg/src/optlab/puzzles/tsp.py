"""Symmetric TSP: degree-2 edge model with lazy subtour elimination."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..model import (Constraint, InvalidSize, LinExpr, Model, ModelError,
                     ObjSense, Sense, VarId)
from ..branch_and_bound import LazyCutHandler, Solution


@dataclass
class WeightedGraph:
    """Complete undirected graph given by a symmetric distance matrix."""

    dist: List[List[float]]
    coords: Optional[List[Tuple[float, float]]] = None

    def __post_init__(self):
        n = len(self.dist)
        for i in range(n):
            if len(self.dist[i]) != n:
                raise ModelError("distance matrix must be square")
            if self.dist[i][i] != 0:
                raise ModelError("diagonal distances must be zero")
            for j in range(n):
                if self.dist[i][j] != self.dist[j][i]:
                    raise ModelError("distance matrix must be symmetric")
                if not math.isfinite(self.dist[i][j]) or self.dist[i][j] < 0:
                    raise ModelError("distances must be finite and nonnegative")

    @property
    def n(self) -> int:
        return len(self.dist)

    @staticmethod
    def from_points(points: Sequence[Tuple[float, float]]) -> "WeightedGraph":
        n = len(points)
        dist = [[math.dist(points[i], points[j]) for j in range(n)]
                for i in range(n)]
        return WeightedGraph(dist, coords=list(points))


def _edges(n: int):
    for i in range(n):
        for j in range(i + 1, n):
            yield i, j


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def build_tsp(graph: WeightedGraph) -> Tuple[Model, LazyCutHandler]:
    """Edge-binary tour model plus a component-cut handler.

    Degree-2 equalities alone admit disconnected 2-factors; the handler
    inspects integer candidates and returns a subtour elimination cut
    for every component smaller than the full node set.
    """
    n = graph.n
    if n < 3:
        raise InvalidSize(f"a tour needs at least 3 nodes, got {n}")
    model = Model(f"tsp_{n}")
    edge_var: Dict[Tuple[int, int], VarId] = {}
    cost = LinExpr()
    for i, j in _edges(n):
        vid = model.add_binary(f"e_{i}_{j}")
        edge_var[i, j] = vid
        cost.add_term(vid, graph.dist[i][j])
    model.set_objective(ObjSense.MINIMIZE, cost)
    for i in range(n):
        incident = LinExpr()
        for j in range(n):
            if j != i:
                incident.add_term(edge_var[min(i, j), max(i, j)], 1.0)
        model.add_constraint(f"degree_{i}", incident, Sense.EQ, 2)

    counter = [0]

    def subtour_cuts(candidate: Dict[VarId, float]) -> List[Constraint]:
        dsu = _DisjointSet(n)
        for (i, j), vid in edge_var.items():
            if round(candidate[vid]) == 1:
                dsu.union(i, j)
        components: Dict[int, List[int]] = {}
        for node in range(n):
            components.setdefault(dsu.find(node), []).append(node)
        cuts = []
        for members in components.values():
            if 1 < len(members) < n:
                inside = LinExpr()
                mset = set(members)
                for i, j in _edges(n):
                    if i in mset and j in mset:
                        inside.add_term(edge_var[i, j], 1.0)
                counter[0] += 1
                cuts.append(Constraint(f"subtour_{counter[0]}", inside,
                                       Sense.LE, len(members) - 1))
        return cuts

    return model, subtour_cuts


def decode_tour(model: Model, solution: Solution) -> List[int]:
    """Ordered node list of the selected cycle, starting at node 0."""
    adjacency: Dict[int, List[int]] = {}
    for vid, var in enumerate(model.variables):
        if round(solution.values.get(vid, 0)) != 1:
            continue
        _, i, j = var.name.split("_")
        i, j = int(i), int(j)
        adjacency.setdefault(i, []).append(j)
        adjacency.setdefault(j, []).append(i)
    tour = [0]
    prev = None
    node = 0
    while True:
        nxts = [k for k in adjacency.get(node, []) if k != prev]
        if not nxts:
            break
        prev, node = node, nxts[0]
        if node == 0:
            break
        tour.append(node)
    return tour


def tour_length(graph: WeightedGraph, tour: Sequence[int]) -> float:
    return sum(graph.dist[tour[k]][tour[(k + 1) % len(tour)]]
               for k in range(len(tour)))


def is_hamiltonian_cycle(n: int, tour: Sequence[int]) -> bool:
    return len(tour) == n and sorted(tour) == list(range(n))


def parse_tsp(text: str) -> WeightedGraph:
    """`n` on the first line, then n coordinate pairs or n matrix rows."""
    lines = [ln for ln in (ln.strip() for ln in text.splitlines())
             if ln and not ln.startswith("#")]
    n = int(lines[0])
    rows = [[float(tok) for tok in ln.split()] for ln in lines[1:n + 1]]
    if all(len(r) == 2 for r in rows) and n != 2:
        return WeightedGraph.from_points([(r[0], r[1]) for r in rows])
    return WeightedGraph(rows)
