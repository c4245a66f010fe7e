import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sopkit.driver import brute_force_optimum
from sopkit.instance import _instance_from_matrix
from sopkit.solution import (Route, SentinelArcError, evaluate_cost,
                             greedy_nearest_feasible, is_feasible,
                             random_feasible, route_from_line)

from gen import naive_is_feasible, random_instance


def unconstrained(n, rng, max_cost=50):
    """Only the start/final anchors; interior nodes freely ordered."""
    matrix = [[0 if i == j else rng.randint(1, max_cost) for j in range(n)]
              for i in range(n)]
    for v in range(1, n):
        matrix[v][0] = -1
    for u in range(n - 1):
        matrix[n - 1][u] = -1
    return _instance_from_matrix(f"free{n}", matrix)


def test_evaluate_cost_t4(t4):
    assert evaluate_cost([0, 1, 2, 3], t4) == 6  # 2 + 3 + 1


def test_evaluate_cost_sentinel_arc(t4):
    with pytest.raises(SentinelArcError, match="2->1"):
        evaluate_cost([0, 2, 1, 3], t4)


def test_reversed_route_differs_on_asymmetric_matrix(rng):
    n = 8
    matrix = [[0 if i == j else rng.randint(1, 1000) for j in range(n)]
              for i in range(n)]
    inst = _instance_from_matrix("asym", matrix)  # no precedence pairs at all
    order = list(range(n))
    assert evaluate_cost(order, inst) != evaluate_cost(order[::-1], inst)


def test_is_feasible_t4(t4):
    assert is_feasible([0, 1, 2, 3], t4)
    assert not is_feasible([0, 2, 1, 3], t4)  # violates (1, 2)
    assert not is_feasible([1, 0, 2, 3], t4)  # not start-anchored
    assert not is_feasible([0, 1, 2], t4)  # not a permutation


def test_is_feasible_matches_naive_dense(rng):
    inst = random_instance(rng, 50, density=0.5)
    order = list(range(50))
    for _ in range(1000):
        rng.shuffle(order)
        assert is_feasible(order, inst) == naive_is_feasible(order, inst)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_is_feasible_matches_naive_random(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, rng.randint(3, 12), density=rng.random())
    order = list(range(inst.n))
    for _ in range(25):
        rng.shuffle(order)
        assert is_feasible(order, inst) == naive_is_feasible(order, inst)
    route = random_feasible(inst, rng)
    assert is_feasible(route.order, inst) == naive_is_feasible(route.order, inst) == True


def test_random_feasible_t4_unique(t4, rng):
    for _ in range(50):
        route = random_feasible(t4, rng)
        assert route.order == [0, 1, 2, 3]
        assert route.cost == 6


def test_random_feasible_uniform_over_interior_orders(rng):
    inst = unconstrained(5, rng)
    draws = 10_000
    counts = {}
    for _ in range(draws):
        route = random_feasible(inst, rng)
        key = tuple(route.order[1:-1])
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 6
    p = 1 / 6
    sigma = (p * (1 - p) / draws) ** 0.5
    for count in counts.values():
        assert abs(count / draws - p) <= 3 * sigma


@pytest.mark.slow
def test_random_feasible_always_feasible(rng):
    for n, density in ((6, 0.0), (9, 0.3), (12, 0.8)):
        inst = random_instance(rng, n, density)
        for _ in range(100_000):
            assert is_feasible(random_feasible(inst, rng).order, inst)


def test_greedy_t4(t4):
    route = greedy_nearest_feasible(t4)
    assert route.order == [0, 1, 2, 3]
    assert route.cost == 6


def test_greedy_on_total_order(rng):
    n = 6
    matrix = [[0 if i == j else rng.randint(1, 9) for j in range(n)] for i in range(n)]
    for v in range(n):
        for u in range(v):
            matrix[v][u] = -1
    inst = _instance_from_matrix("chain", matrix)
    assert greedy_nearest_feasible(inst).order == list(range(n))


@pytest.mark.parametrize("seed", range(10))
def test_greedy_not_below_optimum(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, 8, density=rng.choice([0.0, 0.2, 0.5]))
    optimum, _ = brute_force_optimum(inst)
    greedy = greedy_nearest_feasible(inst)
    assert is_feasible(greedy.order, inst)
    assert greedy.cost >= optimum


def test_route_cached_cost_and_positions(t4):
    route = Route([0, 1, 2, 3], 6)
    assert route.pos == [0, 1, 2, 3]
    assert route.cost == evaluate_cost(route.order, t4)
    assert route.successor_of(1) == 2
    assert route.successor_of(3) is None


def test_route_line_round_trip(t4):
    route = Route([0, 1, 2, 3], 6)
    line = route.to_line()
    assert line == "0 1 2 3"
    back = route_from_line(line, t4)
    assert back.order == route.order and back.cost == 6
