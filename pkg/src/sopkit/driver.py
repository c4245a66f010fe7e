"""Full algorithm runs: ACS / ACS-SA / EACS / EACS-SA wired to an optional
local search, with iteration and wall-clock budgets and trace emission.

One seedable generator per run; stochastic decisions draw from it in a fixed
order: (1) colony-annealer calibration routes (annealing variants only,
skipped when t0_override is set), then per iteration (2) each ant's
construction draws in ant order, (3) each route's local-search draws in ant
order, (4) the active-solution Metropolis draws, (5) the global-update
branch draw (skipped when greedy_update_prob is 0 or 1). Iteration-bounded
runs are therefore deterministic given (config, instance, seed).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field, replace

from .annealing import (AcceptanceStats, AnnealerState, cool, select_active_solution)
from .colony import ColonyParams, PheromoneModel, construct_solution, default_q0, global_pheromone_update
from .instance import Instance
from .local_search import (GREEDY, AcceptancePolicy, LocalSearchOptions, SearchContext, run_local_search)
from .solution import Route, greedy_nearest_feasible, random_feasible

ALGORITHMS = ("acs", "acs-sa", "eacs", "eacs-sa")
LOCAL_SEARCHES = ("none", "sop3", "sop3-sa")


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass
class RunConfig:
    algorithm: str = "acs"
    local_search: str = "none"
    iterations: int | None = None
    time_limit: float | None = None  # seconds
    seed: int = 0
    ants: int = 10
    beta: float = 0.5
    psi: float = 0.01
    rho: float = 0.1
    q0: float | None = None  # None: (n - 20) / n
    candidate_size: int = 25
    lam: float = 0.9999  # colony cooling factor
    gamma: float = 0.1  # colony initial worse-acceptance probability
    lam_ls: float = 0.99
    gamma_ls: float = 0.1
    ls_gate: float = 0.2  # EACS: run LS only within (1 + gate) * best
    greedy_update_prob: float = 0.1  # SA variants: P(update on global best)
    or_limit: int | None = 3
    ls_move_cap_factor: int = 50
    colony_sample: int = 1000  # random routes for eager T0 calibration
    ls_sample: int = 100_000  # move deltas for lazy LS T0 calibration
    t0_override: float | None = None  # skip calibration, fix T0 (tests)
    target_cost: int | None = None  # stop once best reaches this cost
    trace_every: int = 1  # 0 disables the trace

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.local_search not in LOCAL_SEARCHES:
            raise ConfigError(f"unknown local search {self.local_search!r}")
        if self.iterations is None and self.time_limit is None:
            raise ConfigError("set an iteration or time budget")
        if self.iterations is not None and self.iterations < 0:
            raise ConfigError("iterations must be non-negative")
        if self.time_limit is not None and self.time_limit < 0:
            raise ConfigError("time limit must be non-negative")
        for name in ("gamma", "gamma_ls"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ConfigError(f"{name} must be in (0, 1), got {value}")
        for name in ("lam", "lam_ls"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ConfigError(f"{name} must be in (0, 1), got {value}")
        if not 0.0 <= self.greedy_update_prob <= 1.0:
            raise ConfigError("greedy_update_prob must be in [0, 1]")
        if self.q0 is not None and not 0.0 <= self.q0 <= 1.0:
            raise ConfigError("q0 must be in [0, 1]")
        if self.ls_gate < 0.0:
            raise ConfigError("ls_gate must be non-negative")

    @property
    def uses_annealing(self) -> bool:
        return self.algorithm.endswith("-sa")

    @property
    def eacs_like(self) -> bool:
        return self.algorithm.startswith("eacs")


@dataclass
class RunReport:
    instance: str
    algorithm: str
    local_search: str
    seed: int
    best: Route
    iterations: int
    wall_time: float
    trace: list[tuple[int, int, int, float]] = field(default_factory=list)
    worse_acceptances: int = 0

    def deterministic_payload(self) -> tuple:
        """Everything except wall time, for replay comparisons."""
        return (self.instance, self.algorithm, self.local_search, self.seed,
                tuple(self.best.order), self.best.cost, self.iterations,
                tuple(self.trace), self.worse_acceptances)


def ls_gate_check(candidate_cost: int, best_cost: int, gate: float) -> bool:
    """True iff the candidate is within (1 + gate) of the best cost."""
    if best_cost <= 0:
        raise ValueError("best cost must be positive")
    return candidate_cost <= (1.0 + gate) * best_cost


def run(config: RunConfig, instance: Instance) -> RunReport:
    """Execute one full run; deterministic in iteration-bounded mode."""
    config.validate()
    rng = random.Random(config.seed)
    n = instance.n
    q0 = default_q0(n) if config.q0 is None else config.q0
    params = ColonyParams(m=config.ants, beta=config.beta, psi=config.psi,
                          rho=config.rho, q0=q0, candidate_size=config.candidate_size)
    greedy_route = greedy_nearest_feasible(instance)
    model = PheromoneModel(instance, params, tau0=1.0 / (n * max(greedy_route.cost, 1)))

    annealer = None
    stats = AcceptanceStats()
    if config.uses_annealing:
        annealer = AnnealerState(gamma=config.gamma, lam=config.lam)
        if config.t0_override is not None:
            annealer.t0 = config.t0_override
            annealer.t = config.t0_override
            annealer.calibrated = True
        else:
            costs = [random_feasible(instance, rng).cost for _ in range(config.colony_sample)]
            annealer.calibrate_from(abs(b - a) for a, b in zip(costs, costs[1:]))

    ls_policy = None
    ls_options = None
    ls_ctx = None
    if config.local_search != "none":
        if config.local_search == "sop3":
            ls_policy = GREEDY
        else:
            ls_policy = AcceptancePolicy("sa", AnnealerState(
                gamma=config.gamma_ls, lam=config.lam_ls, sample_target=config.ls_sample))
        ls_options = LocalSearchOptions(
            stack_mode="out_of_order" if config.eacs_like else "all",
            or_limit=config.or_limit,
            move_cap_factor=config.ls_move_cap_factor)
        ls_ctx = SearchContext(n)

    best = greedy_route  # construction and gating need a best from iteration 1
    active = best
    mode = "eacs" if config.eacs_like else "acs"
    trace: list[tuple[int, int, int, float]] = []
    start_time = time.perf_counter()
    iteration = 0
    while True:
        if config.iterations is not None and iteration >= config.iterations:
            break
        if config.time_limit is not None and time.perf_counter() - start_time >= config.time_limit:
            break
        if config.target_cost is not None and best.cost <= config.target_cost:
            break
        routes = [construct_solution(mode, model, params, instance, best, rng)
                  for _ in range(params.m)]
        for idx, route in enumerate(routes):
            if ls_policy is not None:
                if not config.eacs_like or ls_gate_check(route.cost, best.cost, config.ls_gate):
                    route = run_local_search(route, best, instance, ls_policy,
                                             ls_options, rng, ls_ctx)
                    routes[idx] = route
            if route.cost < best.cost:
                best = route
        if annealer is not None:
            active = select_active_solution(active, routes, annealer, rng, stats)
            if config.greedy_update_prob >= 1.0:
                target = best
            elif config.greedy_update_prob <= 0.0:
                target = active
            else:
                target = best if rng.random() < config.greedy_update_prob else active
            global_pheromone_update(model, target, params.rho)
            cool(annealer)
        else:
            active = best
            global_pheromone_update(model, best, params.rho)
        iteration += 1
        if config.trace_every and iteration % config.trace_every == 0:
            temp = annealer.t if annealer is not None else 0.0
            trace.append((iteration, best.cost, active.cost, temp))
    wall = time.perf_counter() - start_time
    return RunReport(instance=instance.name, algorithm=config.algorithm,
                     local_search=config.local_search, seed=config.seed,
                     best=best, iterations=iteration, wall_time=wall,
                     trace=trace, worse_acceptances=stats.worse_accepted)


def brute_force_optimum(instance: Instance, limit_n: int = 10) -> tuple[int, Route]:
    """Exact optimum by precedence-pruned depth-first enumeration; the
    testing oracle for desk-scale instances."""
    n = instance.n
    if n > limit_n:
        raise ValueError(f"instance too large for brute force (n={n} > {limit_n})")
    cost = instance.cost
    succ = instance.direct_successors
    count = list(instance.pred_count_template)
    visited = bytearray(n)
    best_cost: int | None = None
    best_order: list[int] | None = None
    order = [instance.start]
    visited[instance.start] = 1
    for w in succ[instance.start]:
        count[w] -= 1

    def dfs(current: int, partial: int) -> None:
        nonlocal best_cost, best_order
        if len(order) == n:
            if best_cost is None or partial < best_cost:
                best_cost = partial
                best_order = list(order)
            return
        row = cost[current]
        for v in range(n):
            if visited[v] or count[v]:
                continue
            nxt = partial + row[v]
            if best_cost is not None and nxt >= best_cost:
                continue
            visited[v] = 1
            order.append(v)
            for w in succ[v]:
                count[w] -= 1
            dfs(v, nxt)
            for w in succ[v]:
                count[w] += 1
            order.pop()
            visited[v] = 0

    dfs(instance.start, 0)
    if best_order is None:
        raise ValueError("no feasible route exists")
    return best_cost, Route(best_order, best_cost)


def config_with_seed(config: RunConfig, seed: int) -> RunConfig:
    return replace(config, seed=seed)
