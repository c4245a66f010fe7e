"""Simulated-annealing kernel shared by the colony-level and LS-level parts.

Two independent AnnealerState instances exist per run: the colony-level one
is calibrated eagerly from a sample of random-route cost differences and
cooled once per iteration; the LS-level one is calibrated lazily from move
deltas observed during early local-search runs and cooled once per
worse-move evaluation, with the temperature reset to T0 at each invocation.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from statistics import mean, stdev


@dataclass
class AnnealerState:
    """Temperature state for one annealing component."""

    gamma: float  # initial worse-acceptance probability, in (0, 1)
    lam: float  # cooling factor, in (0, 1)
    sample_target: int = 100_000
    t: float = 0.0
    t0: float = 0.0
    calibrated: bool = False
    degenerate: bool = False
    sample: list[float] = field(default_factory=list)

    def calibrate_from(self, deltas) -> None:
        deltas = list(deltas)
        self.t0 = initial_temperature(deltas, self.gamma)
        self.degenerate = not any(deltas)
        self.t = self.t0
        self.calibrated = True
        self.sample = []

    def reset_temperature(self) -> None:
        self.t = self.t0


def initial_temperature(deltas, gamma: float) -> float:
    """(mean + 3 * sample standard deviation) / ln(1/gamma) over the
    non-negative cost-difference sample.

    An all-zero sample would give T0 = 0; the smallest positive float is
    returned instead and the caller flags the sample as degenerate.
    """
    deltas = list(deltas)
    if not deltas:
        raise ValueError("empty calibration sample")
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must be in (0, 1), got {gamma}")
    spread = mean(deltas) + 3.0 * (stdev(deltas) if len(deltas) > 1 else 0.0)
    if spread <= 0.0:
        return sys.float_info.min
    return spread / math.log(1.0 / gamma)


def metropolis_accept(delta_c: float, t: float, rng) -> bool:
    """Accept a worsening of magnitude ``delta_c`` with probability
    exp(-delta_c / t).

    Certain outcomes (p >= 1 or p <= 0, including t <= 0) are decided
    without consuming randomness, so a zero-temperature annealer leaves the
    random stream untouched.
    """
    if delta_c <= 0.0:
        return True
    if t <= 0.0:
        return False
    p = math.exp(-delta_c / t)
    if p <= 0.0:
        return False
    return rng.random() < p


def cool(state: AnnealerState) -> None:
    state.t *= state.lam


@dataclass
class AcceptanceStats:
    """Counts Metropolis acceptances of strictly worse candidates."""

    worse_accepted: int = 0


def select_active_solution(active, candidates, state: AnnealerState, rng,
                           stats: AcceptanceStats | None = None):
    """Scan this iteration's solutions in ant order; a cheaper candidate
    replaces the active solution, a worse one replaces it with the Metropolis
    probability. Returns the final active solution."""
    for cand in candidates:
        if cand.cost < active.cost:
            active = cand
        elif metropolis_accept(cand.cost - active.cost, state.t, rng):
            if stats is not None and cand.cost > active.cost:
                stats.worse_accepted += 1
            active = cand
    return active


def calibration_push(state: AnnealerState, delta: float) -> bool:
    """Append |delta| to the calibration sample; once the sample reaches its
    target size, compute T0 and mark the state calibrated. Returns the
    calibrated flag."""
    if state.calibrated:
        raise ValueError("annealer already calibrated")
    state.sample.append(abs(delta))
    if len(state.sample) >= state.sample_target:
        state.calibrate_from(state.sample)
    return state.calibrated
