"""0/1 knapsack model: weight-restricted utility maximization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from ..model import InvalidBounds, LinExpr, Model, ObjSense, Sense
from ..branch_and_bound import Solution


@dataclass
class KnapsackInstance:
    items: List[Tuple[str, float, float]]  # (name, weight, utility)
    capacity: float

    def __post_init__(self):
        if not self.capacity < float("inf"):
            raise InvalidBounds("capacity must be finite")
        for name, weight, _ in self.items:
            if weight < 0:
                raise InvalidBounds(f"item {name!r} has negative weight")


def build_knapsack(instance: KnapsackInstance) -> Model:
    model = Model("knapsack")
    ids = [model.add_binary(f"item_{k}") for k in range(len(instance.items))]
    weights = LinExpr()
    utilities = LinExpr()
    for vid, (_, weight, utility) in zip(ids, instance.items):
        weights.add_term(vid, weight)
        utilities.add_term(vid, utility)
    model.add_constraint("capacity", weights, Sense.LE, instance.capacity)
    model.set_objective(ObjSense.MAXIMIZE, utilities)
    return model


def decode_knapsack(instance: KnapsackInstance, solution: Solution) -> List[str]:
    """Names of the selected items, in instance order."""
    return [instance.items[k][0] for k in range(len(instance.items))
            if round(solution.values[k]) == 1]


def selection_weight(instance: KnapsackInstance, names: List[str]) -> float:
    by_name = {name: weight for name, weight, _ in instance.items}
    return sum(by_name[n] for n in names)


def parse_knapsack_csv(text: str, capacity: float) -> KnapsackInstance:
    """Lines of `name,weight,utility`; blank lines and `#` comments skipped."""
    items = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, weight, utility = (part.strip() for part in line.split(","))
        items.append((name, float(weight), float(utility)))
    return KnapsackInstance(items, capacity)
