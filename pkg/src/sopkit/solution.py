"""Routes over a SOP instance: cost evaluation, feasibility, baseline builders."""

from __future__ import annotations

from dataclasses import dataclass, field

from .instance import SENTINEL, Instance


class SentinelArcError(ValueError):
    """A route traverses a precedence-forbidden arc."""


@dataclass
class Route:
    """A Hamiltonian path as a node order with cached cost.

    ``pos`` is the inverse permutation (node -> position), maintained so
    feasibility checks and the local search get O(1) position lookups.
    """

    order: list[int]
    cost: int
    pos: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.pos:
            self.pos = [0] * len(self.order)
            for idx, node in enumerate(self.order):
                self.pos[node] = idx
        self._succ: list[int] | None = None  # rebuilt after in-place edits

    def successor_of(self, node: int) -> int | None:
        succ = self._succ
        if succ is None:
            order = self.order
            succ = [-1] * len(order)
            for a, b in zip(order, order[1:]):
                succ[a] = b
            self._succ = succ
        nxt = succ[node]
        return None if nxt < 0 else nxt

    def copy(self) -> "Route":
        return Route(list(self.order), self.cost, list(self.pos))

    def to_line(self) -> str:
        """One-line whitespace-separated node list, for logging and replay."""
        return " ".join(str(v) for v in self.order)


def route_from_line(line: str, instance: Instance) -> Route:
    order = [int(tok) for tok in line.split()]
    return Route(order, evaluate_cost(order, instance))


def evaluate_cost(order: list[int], instance: Instance) -> int:
    """Sum of consecutive arc weights; exact integer arithmetic.

    Raises SentinelArcError if the order traverses a forbidden arc.
    """
    cost = instance.cost
    total = 0
    for a, b in zip(order, order[1:]):
        w = cost[a][b]
        if w == SENTINEL:
            raise SentinelArcError(f"arc {a}->{b} is precedence-forbidden")
        total += w
    return total


def is_feasible(order: list[int], instance: Instance) -> bool:
    """True iff ``order`` is a start/final-anchored permutation respecting
    every precedence pair."""
    n = instance.n
    if len(order) != n or len(set(order)) != n:
        return False
    if order[0] != instance.start or order[-1] != instance.final:
        return False
    pred_masks = instance.direct_pred_masks
    visited = 0
    for v in order:
        if pred_masks[v] & ~visited:
            return False
        visited |= 1 << v
    return True


def random_feasible(instance: Instance, rng) -> Route:
    """Uniform constructive draw: repeatedly pick uniformly among nodes whose
    unvisited-predecessor count is zero."""
    n = instance.n
    succ = instance.direct_successors
    count = list(instance.pred_count_template)
    frontier = [v for v in range(n) if count[v] == 0]
    cost_matrix = instance.cost
    order = []
    total = 0
    prev = -1
    for _ in range(n):
        idx = rng.randrange(len(frontier)) if len(frontier) > 1 else 0
        v = frontier[idx]
        frontier[idx] = frontier[-1]
        frontier.pop()
        if prev >= 0:
            total += cost_matrix[prev][v]
        order.append(v)
        prev = v
        for w in succ[v]:
            count[w] -= 1
            if count[w] == 0:
                frontier.append(w)
    return Route(order, total)


def greedy_nearest_feasible(instance: Instance) -> Route:
    """From the start node, repeatedly move to the cheapest feasible unvisited
    node; ties broken by lowest node index. Supplies the nearest-neighbour
    cost used to seed the pheromone level."""
    n = instance.n
    succ = instance.direct_successors
    count = list(instance.pred_count_template)
    cost_matrix = instance.cost
    visited = bytearray(n)
    current = instance.start
    visited[current] = 1
    for w in succ[current]:
        count[w] -= 1
    order = [current]
    total = 0
    for _ in range(n - 1):
        row = cost_matrix[current]
        best = -1
        best_cost = None
        for v in range(n):
            if visited[v] or count[v]:
                continue
            if best_cost is None or row[v] < best_cost:
                best = v
                best_cost = row[v]
        total += row[best]
        current = best
        visited[current] = 1
        for w in succ[current]:
            count[w] -= 1
        order.append(current)
    return Route(order, total)
