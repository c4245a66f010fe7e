"""Pheromone model and solution construction for ACS and EACS.

Node choice follows the pseudo-random proportional rule: with probability q0
the ant exploits (argmax of tau * eta^beta over the candidate set), otherwise
it samples proportionally to the same products. EACS first tries the
successor of the current node in the best solution found so far.
"""

from __future__ import annotations

from dataclasses import dataclass

from .instance import SENTINEL, Instance
from .solution import Route, greedy_nearest_feasible


@dataclass
class ColonyParams:
    m: int = 10  # ants
    beta: float = 0.5  # heuristic exponent
    psi: float = 0.01  # local evaporation
    rho: float = 0.1  # global evaporation
    q0: float = 0.9  # exploitation threshold
    candidate_size: int = 25

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one ant")
        if not 0.0 < self.psi < 1.0 or not 0.0 < self.rho < 1.0:
            raise ValueError("psi and rho must be in (0, 1)")
        if not 0.0 <= self.q0 <= 1.0:
            raise ValueError("q0 must be in [0, 1]")


def default_q0(n: int) -> float:
    """(n - 20) / n, the size-scaled exploitation threshold; 0 for n <= 20."""
    return max(0.0, (n - 20) / n)


class PheromoneModel:
    """Pheromone matrix tau, heuristic matrix eta, candidate lists, tau0.

    eta(i, j) = 1 / max(cost(i, j), 1), so zero-cost arcs keep eta finite.
    Forbidden arcs get eta = 0; they are never selectable anyway because the
    construction frontier only offers precedence-feasible nodes.
    """

    def __init__(self, instance: Instance, params: ColonyParams, tau0: float):
        if tau0 <= 0.0:
            raise ValueError("tau0 must be positive")
        n = instance.n
        self.instance = instance
        self.tau0 = tau0
        self.tau = [[tau0] * n for _ in range(n)]
        cost = instance.cost
        beta = params.beta
        self.eta = [
            [0.0 if c == SENTINEL else 1.0 / max(c, 1) for c in row] for row in cost
        ]
        self.eta_pow = [[e**beta for e in row] for row in self.eta]
        size = params.candidate_size
        self.candidates = []
        for i in range(n):
            row = cost[i]
            usable = [j for j in range(n) if j != i and row[j] != SENTINEL]
            usable.sort(key=lambda j: (row[j], j))
            self.candidates.append(usable[:size])

    @classmethod
    def from_instance(cls, instance: Instance, params: ColonyParams,
                      tau0: float | None = None) -> "PheromoneModel":
        if tau0 is None:
            nn_cost = greedy_nearest_feasible(instance).cost
            tau0 = 1.0 / (instance.n * max(nn_cost, 1))
        return cls(instance, params, tau0)


class AntState:
    """Partial route plus the frontier bookkeeping: a node is selectable iff
    it is unvisited and its unvisited-predecessor count is zero. The frontier
    is maintained incrementally as a list."""

    __slots__ = ("instance", "visited", "pred_count", "route", "current", "_frontier")

    def __init__(self, instance: Instance):
        n = instance.n
        self.instance = instance
        self.visited = bytearray(n)
        self.pred_count = list(instance.pred_count_template)
        self.route = [instance.start]
        self.current = instance.start
        self.visited[instance.start] = 1
        count = self.pred_count
        for w in instance.direct_successors[instance.start]:
            count[w] -= 1
        self._frontier = [v for v in range(n) if not self.visited[v] and count[v] == 0]

    def selectable(self, v: int) -> bool:
        return not self.visited[v] and self.pred_count[v] == 0

    def frontier(self) -> list[int]:
        return list(self._frontier)

    def advance(self, v: int) -> None:
        self.visited[v] = 1
        self.route.append(v)
        self.current = v
        count = self.pred_count
        frontier = self._frontier
        frontier.remove(v)
        for w in self.instance.direct_successors[v]:
            count[w] -= 1
            if count[w] == 0:
                frontier.append(w)


def _greedy_pick(nodes: list[int], tau_row: list[float], eta_row: list[float]) -> int:
    best = -1
    best_score = -1.0
    for l in nodes:
        score = tau_row[l] * eta_row[l]
        if score > best_score or (score == best_score and l < best):
            best = l
            best_score = score
    return best


def _proportional_pick(nodes: list[int], tau_row: list[float], eta_row: list[float], rng) -> int:
    weights = [tau_row[l] * eta_row[l] for l in nodes]
    total = sum(weights)
    if total <= 0.0:  # all weights underflowed; fall back to uniform
        return nodes[rng.randrange(len(nodes))]
    r = rng.random() * total
    acc = 0.0
    for l, w in zip(nodes, weights):
        acc += w
        if r < acc:
            return l
    return nodes[-1]


def _selectable_candidates(ant: AntState, model: PheromoneModel) -> list[int]:
    visited = ant.visited
    count = ant.pred_count
    nodes = [l for l in model.candidates[ant.current]
             if not visited[l] and count[l] == 0]
    return nodes if nodes else ant._frontier


def select_next_acs(ant: AntState, model: PheromoneModel, params: ColonyParams, rng) -> int:
    """One draw q; q <= q0 exploits, otherwise samples proportionally."""
    q = rng.random()
    nodes = _selectable_candidates(ant, model)
    if not nodes:
        raise RuntimeError("empty construction frontier; precedence relation broken")
    i = ant.current
    if q <= params.q0:
        return _greedy_pick(nodes, model.tau[i], model.eta_pow[i])
    return _proportional_pick(nodes, model.tau[i], model.eta_pow[i], rng)


def select_next_eacs(ant: AntState, model: PheromoneModel, params: ColonyParams,
                     best: Route, rng) -> int:
    """Like ACS but the exploiting branch first tries the successor of the
    current node in the best solution so far."""
    q = rng.random()
    if q <= params.q0:
        w = best.successor_of(ant.current)
        if w is not None and not ant.visited[w] and ant.pred_count[w] == 0:
            return w
        nodes = _selectable_candidates(ant, model)
        if not nodes:
            raise RuntimeError("empty construction frontier; precedence relation broken")
        i = ant.current
        return _greedy_pick(nodes, model.tau[i], model.eta_pow[i])
    nodes = _selectable_candidates(ant, model)
    if not nodes:
        raise RuntimeError("empty construction frontier; precedence relation broken")
    i = ant.current
    return _proportional_pick(nodes, model.tau[i], model.eta_pow[i], rng)


def local_pheromone_update(model: PheromoneModel, a: int, b: int, psi: float) -> None:
    """tau(a,b) <- (1 - psi) tau(a,b) + psi tau0; contracts toward tau0."""
    row = model.tau[a]
    row[b] = (1.0 - psi) * row[b] + psi * model.tau0


def global_pheromone_update(model: PheromoneModel, route: Route, rho: float) -> None:
    """Reinforce the arcs of ``route``: tau <- (1 - rho) tau + rho / cost.
    Arcs not on the route keep their exact prior values."""
    if route.cost <= 0:
        raise ValueError("route cost must be positive for the global update")
    deposit = 1.0 / route.cost
    tau = model.tau
    keep = 1.0 - rho
    add = rho * deposit
    order = route.order
    for a, b in zip(order, order[1:]):
        tau[a][b] = keep * tau[a][b] + add


def construct_solution(mode: str, model: PheromoneModel, params: ColonyParams,
                       instance: Instance, best: Route | None, rng) -> Route:
    """Build a feasible route node by node with the mode's selection rule,
    applying the local pheromone update after each arc traversal. There is no
    closing arc: the objective is an open path."""
    if mode not in ("acs", "eacs"):
        raise ValueError(f"unknown construction mode {mode!r}")
    if mode == "eacs" and best is None:
        raise ValueError("eacs construction needs the best route so far")
    ant = AntState(instance)
    cost = instance.cost
    psi = params.psi
    total = 0
    prev = instance.start
    for _ in range(instance.n - 1):
        if mode == "eacs":
            nxt = select_next_eacs(ant, model, params, best, rng)
        else:
            nxt = select_next_acs(ant, model, params, rng)
        total += cost[prev][nxt]
        local_pheromone_update(model, prev, nxt, psi)
        ant.advance(nxt)
        prev = nxt
    return Route(ant.route, total)
