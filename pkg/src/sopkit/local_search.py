"""Path-preserving 3-exchange local search for the SOP.

A move removes arcs at cut positions a < b < c and reconnects the route as
prefix(0..a), segment(b+1..c), segment(a+1..b), suffix(c+1..), swapping two
adjacent subpaths without reversal. The forward search grows the left
segment from a pivot position h rightwards; the backward search mirrors it
with decreasing indices. A label epoch marks nodes that must come after the
growing segment so the scan stops at the first infeasible extension in O(1)
per step. Don't-look bits and a duplicate-free don't-push stack focus the
search on recently changed regions.

Move acceptance is pluggable: greedy accepts only strict improvements over
the best move of the current scan; the annealing policy also accepts ties
with probability 0.1 and worse moves per the Metropolis criterion, cooling
once per worse-move evaluation and collecting its calibration sample from
the first observed deltas.
"""

from __future__ import annotations

from dataclasses import dataclass

from .annealing import AnnealerState, calibration_push, cool, metropolis_accept
from .instance import Instance
from .solution import Route

TIE_ACCEPT_PROB = 0.1
DEFAULT_OR_LIMIT = 3


@dataclass
class ExchangeMove:
    """Cut positions with the cost decrease if applied (removed minus added)."""

    h: int
    i: int
    j: int
    delta: int


@dataclass
class AcceptancePolicy:
    """Move-acceptance rule: "greedy", "sa", or "probe" (never accepts;
    used to enumerate a search's move set without disturbing the route)."""

    kind: str
    sa_state: AnnealerState | None = None


GREEDY = AcceptancePolicy("greedy")
PROBE = AcceptancePolicy("probe")


def accept_move(policy: AcceptancePolicy, delta: int, best_delta: int, rng) -> bool:
    """Decide whether a move with decrease ``delta`` replaces the scan's
    current best of ``best_delta``."""
    if policy.kind == "greedy":
        return delta > best_delta
    if policy.kind == "probe":
        return False
    d = delta - best_delta
    if d > 0:
        return True  # always accept a better move
    if d == 0:
        return rng.random() < TIE_ACCEPT_PROB
    state = policy.sa_state
    if state.calibrated:
        ok = metropolis_accept(float(-d), state.t, rng)
        cool(state)
        return ok
    calibration_push(state, float(-d))
    return False


class SearchContext:
    """Per-run scratch state: don't-push stack with membership, don't-look
    bits, and the labeling marks with their epoch counter. Bits and stack
    membership are cleared per invocation by bumping epochs."""

    def __init__(self, n: int):
        self.n = n
        self.mark = [0] * n
        self.count = 0
        self.dont_look = [0] * n
        self._look_epoch = 0
        self.stack: list[int] = []
        self._on_stack = [0] * n
        self._stack_epoch = 0
        self.last_pivots: tuple[int, ...] = ()

    def begin_invocation(self) -> None:
        self._look_epoch += 1
        self._stack_epoch += 1
        self.stack.clear()

    def push(self, v: int) -> None:
        if self._on_stack[v] != self._stack_epoch:
            self._on_stack[v] = self._stack_epoch
            self.stack.append(v)

    def pop(self) -> int:
        v = self.stack.pop()
        self._on_stack[v] = 0
        return v

    def look_blocked(self, v: int) -> bool:
        return self.dont_look[v] == self._look_epoch

    def look_set(self, v: int) -> None:
        self.dont_look[v] = self._look_epoch

    def look_clear(self, v: int) -> None:
        self.dont_look[v] = 0


def exchange_delta(route: Route, h: int, i: int, j: int, instance: Instance) -> int:
    """Removed-minus-added arc cost for cuts h < i < j; positive = improvement."""
    n = len(route.order)
    if not 0 <= h < i < j <= n - 2:
        raise IndexError(f"invalid cut positions ({h}, {i}, {j}) for n={n}")
    order = route.order
    cost = instance.cost
    nh, nh1 = order[h], order[h + 1]
    ni, ni1 = order[i], order[i + 1]
    nj, nj1 = order[j], order[j + 1]
    removed = cost[nh][nh1] + cost[ni][ni1] + cost[nj][nj1]
    added = cost[nh][ni1] + cost[nj][nh1] + cost[ni][nj1]
    return removed - added


def apply_exchange(route: Route, move: ExchangeMove) -> Route:
    """Swap the two subpaths in place, decrement the cached cost by the
    move's delta, and refresh the position index."""
    a, b, c = sorted((move.h, move.i, move.j))
    order = route.order
    order[a + 1 : c + 1] = order[b + 1 : c + 1] + order[a + 1 : b + 1]
    pos = route.pos
    for idx in range(a + 1, c + 1):
        pos[order[idx]] = idx
    route.cost -= move.delta
    route._succ = None
    return route


def forward_search(h: int, route: Route, instance: Instance, ctx: SearchContext,
                   policy: AcceptancePolicy, rng, or_limit: int | None = DEFAULT_OR_LIMIT,
                   explored: list | None = None) -> bool:
    """Search for an acceptable move with the left segment starting at
    position h+1 and growing rightwards (bounded by ``or_limit`` positions);
    the right segment is scanned until a label blocks it. The accepted
    exchange is applied to the route; its six pivot nodes are recorded on
    ``ctx.last_pivots``. Returns whether a move was applied."""
    order = route.order
    n = len(order)
    cost = instance.cost
    succ_lists = instance.succ_closure_lists
    mark = ctx.mark
    ctx.count += 1
    count = ctx.count
    i_hi = n - 3 if or_limit is None else min(h + or_limit, n - 3)
    greedy = policy.kind == "greedy"
    node_h = order[h]
    for i in range(h + 1, i_hi + 1):
        node_i = order[i]
        for v in succ_lists[node_i]:
            mark[v] = count
        node_h1 = order[h + 1]
        node_i1 = order[i + 1]
        fixed = cost[node_h][node_h1] + cost[node_i][node_i1] - cost[node_h][node_i1]
        best_delta = 0
        best_j = -1
        j = i + 1
        while j <= n - 2:
            node_j = order[j]
            if mark[node_j] == count:
                break
            node_j1 = order[j + 1]
            delta = fixed + cost[node_j][node_j1] - cost[node_j][node_h1] - cost[node_i][node_j1]
            if explored is not None:
                explored.append((h, i, j))
            if (delta > best_delta) if greedy else accept_move(policy, delta, best_delta, rng):
                best_j = j
                best_delta = delta
            j += 1
        if best_j >= 0:
            ctx.last_pivots = (node_h, node_h1, node_i, node_i1,
                               order[best_j], order[best_j + 1])
            apply_exchange(route, ExchangeMove(h, i, best_j, best_delta))
            return True
    return False


def backward_search(h: int, route: Route, instance: Instance, ctx: SearchContext,
                    policy: AcceptancePolicy, rng, or_limit: int | None = DEFAULT_OR_LIMIT,
                    explored: list | None = None) -> bool:
    """Mirror of the forward search with indices decreasing: the segment
    ending at position h grows leftwards, and candidate nodes joining the
    earlier segment are blocked once they must precede a grown-segment node."""
    order = route.order
    n = len(order)
    if h > n - 2:
        return False
    cost = instance.cost
    pred_lists = instance.pred_closure_lists
    mark = ctx.mark
    ctx.count += 1
    count = ctx.count
    i_lo = 1 if or_limit is None else max(h - or_limit, 1)
    greedy = policy.kind == "greedy"
    node_h = order[h]
    node_h1 = order[h + 1]
    for i in range(h - 1, i_lo - 1, -1):
        node_i1 = order[i + 1]
        for v in pred_lists[node_i1]:
            mark[v] = count
        node_i = order[i]
        fixed = cost[node_i][node_i1] + cost[node_h][node_h1] - cost[node_i][node_h1]
        best_delta = 0
        best_j = -1
        j = i - 1
        while j >= 0:
            node_j1 = order[j + 1]
            if mark[node_j1] == count:
                break
            node_j = order[j]
            delta = fixed + cost[node_j][node_j1] - cost[node_j][node_i1] - cost[node_h][node_j1]
            if explored is not None:
                explored.append((j, i, h))
            if (delta > best_delta) if greedy else accept_move(policy, delta, best_delta, rng):
                best_j = j
                best_delta = delta
            j -= 1
        if best_j >= 0:
            ctx.last_pivots = (order[best_j], order[best_j + 1], node_i, node_i1,
                               node_h, node_h1)
            apply_exchange(route, ExchangeMove(best_j, i, h, best_delta))
            return True
    return False


def init_dont_push_stack(route: Route, best: Route, mode: str, ctx: SearchContext) -> None:
    """Fill the stack: mode "all" pushes every node; "out_of_order" pushes a
    node iff its successor in the route differs from its successor in the
    best solution. Nodes are pushed in reverse route order so pops proceed
    from the route start."""
    order = route.order
    if mode == "all":
        for v in reversed(order):
            ctx.push(v)
    elif mode == "out_of_order":
        for idx in range(len(order) - 2, -1, -1):
            v = order[idx]
            if best.successor_of(v) != order[idx + 1]:
                ctx.push(v)
    else:
        raise ValueError(f"unknown stack mode {mode!r}")


@dataclass
class LocalSearchOptions:
    stack_mode: str = "all"  # "all" or "out_of_order"
    or_limit: int | None = DEFAULT_OR_LIMIT
    move_cap_factor: int = 50  # annealing policy: max applied moves is factor * n


def run_local_search(route: Route, best: Route, instance: Instance,
                     policy: AcceptancePolicy, options: LocalSearchOptions, rng,
                     ctx: SearchContext | None = None) -> Route:
    """Pop pivots from the don't-push stack, try the forward then the
    backward search, push the six pivot nodes of any applied move back and
    clear their don't-look bits, until the stack empties.

    Greedy searches over the full stack re-drain (stack refilled, bits
    cleared) until a complete pass applies no move, so the returned route is
    3-optimal in the searched neighborhood; the "out_of_order" stack is a
    focused repair pass and drains once. The annealing policy may apply
    worsening moves, so it drains once with applied moves capped at
    move_cap_factor * n and returns the best route seen.
    """
    if ctx is None:
        ctx = SearchContext(instance.n)
    ctx.begin_invocation()
    state = policy.sa_state
    if state is not None and state.calibrated:
        state.reset_temperature()
    init_dont_push_stack(route, best, options.stack_mode, ctx)
    move_cap = None if policy.kind == "greedy" else options.move_cap_factor * instance.n
    redrain = policy.kind == "greedy" and options.stack_mode == "all"
    best_seen_cost = route.cost
    best_seen_order = None
    applied = 0
    stack = ctx.stack
    while True:
        drain_applied = 0
        while stack:
            v = ctx.pop()
            if ctx.look_blocked(v):
                continue
            h = route.pos[v]
            found = forward_search(h, route, instance, ctx, policy, rng, options.or_limit)
            if not found:
                found = backward_search(h, route, instance, ctx, policy, rng, options.or_limit)
            if found:
                drain_applied += 1
                applied += 1
                for p in ctx.last_pivots:
                    ctx.look_clear(p)
                    ctx.push(p)
                if route.cost < best_seen_cost:
                    best_seen_cost = route.cost
                    best_seen_order = list(route.order)
                if move_cap is not None and applied >= move_cap:
                    break
            else:
                ctx.look_set(v)
        if not (redrain and drain_applied):
            break
        ctx.begin_invocation()
        init_dont_push_stack(route, best, "all", ctx)
    if route.cost > best_seen_cost and best_seen_order is not None:
        return Route(best_seen_order, best_seen_cost)
    return route
