import itertools
import random

import pytest

from sopkit.driver import (ConfigError, RunConfig, brute_force_optimum,
                           ls_gate_check, run)
from sopkit.solution import evaluate_cost, is_feasible, random_feasible

from gen import random_instance


def test_ls_gate_check():
    assert ls_gate_check(1199, 1000, 0.2)
    assert ls_gate_check(1200, 1000, 0.2)
    assert not ls_gate_check(1201, 1000, 0.2)
    assert ls_gate_check(1000, 1000, 0.0)  # gate 0: ties and improvements only
    assert not ls_gate_check(1001, 1000, 0.0)
    with pytest.raises(ValueError):
        ls_gate_check(10, 0, 0.2)


def test_brute_force_t4(t4):
    cost, route = brute_force_optimum(t4)
    assert cost == 6
    assert route.order == [0, 1, 2, 3]


def test_brute_force_chain(rng):
    from sopkit.instance import _instance_from_matrix

    n = 6
    matrix = [[0 if i == j else rng.randint(1, 9) for j in range(n)] for i in range(n)]
    for v in range(n):
        for u in range(v):
            matrix[v][u] = -1
    inst = _instance_from_matrix("chain", matrix)
    cost, route = brute_force_optimum(inst)
    assert route.order == list(range(n))
    assert cost == evaluate_cost(route.order, inst)


def test_brute_force_respects_limit(rng):
    inst = random_instance(rng, 12, density=0.2)
    with pytest.raises(ValueError, match="too large"):
        brute_force_optimum(inst, limit_n=10)


@pytest.mark.parametrize("seed", range(5))
def test_brute_force_below_random_sampling(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, 8, density=rng.choice([0.0, 0.3, 0.6]))
    optimum, route = brute_force_optimum(inst)
    assert is_feasible(route.order, inst)
    assert optimum == evaluate_cost(route.order, inst)
    sampled = min(random_feasible(inst, rng).cost for _ in range(10_000))
    assert optimum <= sampled


def test_config_validation():
    with pytest.raises(ConfigError, match="budget"):
        RunConfig(algorithm="acs").validate()
    with pytest.raises(ConfigError, match="algorithm"):
        RunConfig(algorithm="tabu", iterations=1).validate()
    with pytest.raises(ConfigError, match="local search"):
        RunConfig(local_search="2opt", iterations=1).validate()
    with pytest.raises(ConfigError, match="gamma"):
        RunConfig(iterations=1, gamma=1.0).validate()
    with pytest.raises(ConfigError, match="q0"):
        RunConfig(iterations=1, q0=1.5).validate()
    RunConfig(iterations=10).validate()


ALL_COMBOS = list(itertools.product(
    ["acs", "acs-sa", "eacs", "eacs-sa"], ["none", "sop3", "sop3-sa"]))


@pytest.mark.parametrize("algorithm,ls", ALL_COMBOS)
def test_run_t4_all_variants(t4, algorithm, ls):
    config = RunConfig(algorithm=algorithm, local_search=ls, iterations=10,
                       seed=3, colony_sample=50)
    report = run(config, t4)
    assert report.best.cost == 6
    assert report.best.order == [0, 1, 2, 3]
    assert report.iterations == 10
    assert len(report.trace) == 10


@pytest.mark.parametrize("algorithm,ls", ALL_COMBOS)
def test_run_deterministic_replay(rng, algorithm, ls):
    inst = random_instance(rng, 12, density=0.3)
    config = RunConfig(algorithm=algorithm, local_search=ls, iterations=40,
                       seed=11, colony_sample=30, ls_sample=200)
    first = run(config, inst)
    second = run(config, inst)
    assert first.deterministic_payload() == second.deterministic_payload()
    assert is_feasible(first.best.order, inst)
    assert first.best.cost == evaluate_cost(first.best.order, inst)


def test_best_so_far_never_increases(rng):
    inst = random_instance(rng, 14, density=0.2)
    config = RunConfig(algorithm="acs-sa", local_search="sop3", iterations=150,
                       seed=2, colony_sample=40)
    report = run(config, inst)
    costs = [row[1] for row in report.trace]
    assert all(a >= b for a, b in zip(costs, costs[1:]))
    assert costs[-1] == report.best.cost


def test_zero_iteration_budget(t4):
    report = run(RunConfig(algorithm="acs", iterations=0), t4)
    assert report.iterations == 0
    assert report.trace == []
    assert is_feasible(report.best.order, t4)


def test_target_cost_stops_early(t4):
    config = RunConfig(algorithm="acs", iterations=10_000, target_cost=6)
    report = run(config, t4)
    assert report.best.cost == 6
    assert report.iterations < 10_000


def test_time_limit_budget(rng):
    inst = random_instance(rng, 10, density=0.2)
    config = RunConfig(algorithm="eacs", local_search="sop3", time_limit=0.3)
    report = run(config, inst)
    assert report.iterations > 0
    assert report.wall_time >= 0.3


def test_trace_decimation(rng):
    inst = random_instance(rng, 8, density=0.2)
    config = RunConfig(algorithm="acs", iterations=20, trace_every=5)
    report = run(config, inst)
    assert [row[0] for row in report.trace] == [5, 10, 15, 20]
    config = RunConfig(algorithm="acs", iterations=20, trace_every=0)
    assert run(config, inst).trace == []


def test_sa_trace_carries_cooled_temperature(rng):
    inst = random_instance(rng, 10, density=0.2)
    config = RunConfig(algorithm="acs-sa", iterations=30, seed=1, colony_sample=50)
    report = run(config, inst)
    temps = [row[3] for row in report.trace]
    assert temps[0] > 0.0
    assert all(b == pytest.approx(a * config.lam) for a, b in zip(temps, temps[1:]))


@pytest.mark.parametrize("ls", ["none", "sop3"])
def test_acs_sa_degenerates_to_acs(rng, ls):
    """Zero initial temperature plus certain greedy updates: the annealing
    variant must replay the plain ACS trace draw for draw."""
    inst = random_instance(rng, 12, density=0.25)
    base = dict(local_search=ls, iterations=60, seed=21)
    plain = run(RunConfig(algorithm="acs", **base), inst)
    degenerate = run(RunConfig(algorithm="acs-sa", t0_override=0.0,
                               greedy_update_prob=1.0, **base), inst)
    assert degenerate.trace == plain.trace
    assert degenerate.best.order == plain.best.order
    assert degenerate.best.cost == plain.best.cost


def test_eacs_q0_zero_matches_acs_distribution(rng):
    inst = random_instance(rng, 12, density=0.25)
    base = dict(local_search="none", iterations=40, seed=9, q0=0.0)
    acs = run(RunConfig(algorithm="acs", **base), inst)
    eacs = run(RunConfig(algorithm="eacs", **base), inst)
    assert eacs.trace == acs.trace
    assert eacs.best.order == acs.best.order


from hypothesis import given, settings
from hypothesis import strategies as st


@settings(max_examples=25, deadline=None)
@given(
    seed=st.integers(0, 10**6),
    algorithm=st.sampled_from(["acs", "acs-sa", "eacs", "eacs-sa"]),
    ls=st.sampled_from(["none", "sop3", "sop3-sa"]),
    q0=st.sampled_from([None, 0.0, 0.5, 1.0]),
    or_limit=st.sampled_from([1, 3, None]),
)
def test_run_fuzz_feasible_and_replayable(seed, algorithm, ls, q0, or_limit):
    rng = random.Random(seed)
    inst = random_instance(rng, rng.randint(4, 10), density=rng.random())
    config = RunConfig(algorithm=algorithm, local_search=ls, iterations=12,
                       seed=seed, q0=q0, or_limit=or_limit, colony_sample=20,
                       ls_sample=150, ls_move_cap_factor=4)
    report = run(config, inst)
    assert is_feasible(report.best.order, inst)
    assert report.best.cost == evaluate_cost(report.best.order, inst)
    assert run(config, inst).deterministic_payload() == report.deterministic_payload()


def test_worse_acceptances_counted(rng):
    inst = random_instance(rng, 12, density=0.2)
    config = RunConfig(algorithm="acs-sa", iterations=200, seed=4,
                       colony_sample=40, gamma=0.9, lam=0.9999)
    report = run(config, inst)
    assert report.worse_acceptances > 0
    plain = run(RunConfig(algorithm="acs", iterations=200, seed=4), inst)
    assert plain.worse_acceptances == 0
