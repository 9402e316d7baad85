"""Shortest path as a unit-flow ILP over a directed arc list."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Hashable, List, Tuple

from ..model import InvalidBounds, InvalidSize, LinExpr, Model, ObjSense, Sense
from ..branch_and_bound import Solution

Node = Hashable
Arc = Tuple[Node, Node, float]


@dataclass
class PathInstance:
    arcs: List[Arc]  # (tail, head, cost >= 0)
    source: Node
    target: Node

    def __post_init__(self):
        if self.source == self.target:
            raise InvalidSize("source and target must differ")
        for u, v, cost in self.arcs:
            if cost < 0:
                raise InvalidBounds(f"arc {u}->{v} has negative cost")

    @property
    def nodes(self):
        seen = []
        for u, v, _ in self.arcs:
            for w in (u, v):
                if w not in seen:
                    seen.append(w)
        return seen


def build_shortest_path(instance: PathInstance) -> Model:
    """Min-cost unit flow from source to target; binary arc selection."""
    model = Model("shortest_path")
    cost = LinExpr()
    out_arcs: Dict[Node, List[int]] = defaultdict(list)
    in_arcs: Dict[Node, List[int]] = defaultdict(list)
    for k, (u, v, c) in enumerate(instance.arcs):
        vid = model.add_binary(f"arc_{k}")
        cost.add_term(vid, c)
        out_arcs[u].append(vid)
        in_arcs[v].append(vid)
    model.set_objective(ObjSense.MINIMIZE, cost)
    for idx, node in enumerate(instance.nodes):
        balance = LinExpr()
        for vid in out_arcs[node]:
            balance.add_term(vid, 1.0)
        for vid in in_arcs[node]:
            balance.add_term(vid, -1.0)
        if node == instance.source:
            rhs = 1.0
        elif node == instance.target:
            rhs = -1.0
        else:
            rhs = 0.0
        model.add_constraint(f"flow_{idx}", balance, Sense.EQ, rhs)
    return model


def decode_path(instance: PathInstance, solution: Solution) -> List[Arc]:
    """Selected arcs ordered from source to target."""
    chosen = {k for k in range(len(instance.arcs))
              if round(solution.values[k]) == 1}
    by_tail = {}
    for k in chosen:
        u, v, c = instance.arcs[k]
        by_tail[u] = (u, v, c)
    path = []
    node = instance.source
    while node != instance.target and node in by_tail:
        arc = by_tail.pop(node)
        path.append(arc)
        node = arc[1]
    return path


def is_path(instance: PathInstance, arcs: List[Arc]) -> bool:
    """Connectivity check: arcs chain from source to target without repeats."""
    if not arcs:
        return False
    if arcs[0][0] != instance.source or arcs[-1][1] != instance.target:
        return False
    visited = {instance.source}
    for (u, v, _), nxt in zip(arcs, arcs[1:] + [None]):
        if v in visited:
            return False
        visited.add(v)
        if nxt is not None and nxt[0] != v:
            return False
    return True


def parse_arc_list(text: str):
    """Lines `u v cost`; first line `source target` names the endpoints."""
    lines = [ln.strip() for ln in text.splitlines()
             if ln.strip() and not ln.strip().startswith("#")]
    source, target = lines[0].split()
    arcs = []
    for line in lines[1:]:
        u, v, cost = line.split()
        arcs.append((u, v, float(cost)))
    return PathInstance(arcs, source, target)
