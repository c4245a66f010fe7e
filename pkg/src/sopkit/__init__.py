"""Ant colony + simulated annealing solvers for the Sequential Ordering Problem."""

from .annealing import (AnnealerState, calibration_push, cool, initial_temperature,
                        metropolis_accept, select_active_solution)
from .colony import (AntState, ColonyParams, PheromoneModel, construct_solution,
                     default_q0, global_pheromone_update, local_pheromone_update,
                     select_next_acs, select_next_eacs)
from .driver import (ConfigError, RunConfig, RunReport, brute_force_optimum,
                     ls_gate_check, run)
from .harness import (ExperimentSpec, InstanceError, RawRecord, SummaryRow,
                      run_experiment, summarize)
from .instance import (Instance, InstanceFormatError, PrecedenceCycleError,
                       ValidationReport, load_instance, parse_matrix_instance,
                       validate)
from .local_search import (AcceptancePolicy, ExchangeMove, LocalSearchOptions,
                           SearchContext, accept_move, apply_exchange,
                           backward_search, exchange_delta, forward_search,
                           init_dont_push_stack, run_local_search)
from .solution import (Route, SentinelArcError, evaluate_cost, greedy_nearest_feasible,
                       is_feasible, random_feasible, route_from_line)

__version__ = "0.1.0"
