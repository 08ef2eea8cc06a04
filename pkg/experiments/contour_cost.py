"""
Resolvent cost against contour location for the contour-cost command.

For each delta the smallest Chebyshev degree n is found at which the
polynomial solution of (delta - A)u = g has relative residual at most eps' on
a fine grid. Degrees follow a fixed start and then double up to a cap; a row
that reaches the cap unconverged says so. Small delta gives a resolvent with
a cusp at the repelling fixed point and needs large n.
"""

import logging
from typing import Dict, List

import numpy as np
import pandas as pd

from config import (
    COST_DELTAS,
    COST_FINE_POINTS,
    COST_LADDER,
    COST_PROFILE_DEGREE,
    EXAMPLE_PRESETS,
    PROFILE_POINTS,
)
from experiments.setups import build_problem
from utils.data_processing import ExperimentConfig
from utils.errors import ConfigError
from utils.operators import solve_shifted

logger = logging.getLogger(__name__)


def degree_ladder(max_degree: int) -> List[int]:
    """Degrees tried in order, ending exactly at max_degree"""
    ladder = [n for n in COST_LADDER if n <= max_degree]
    while ladder[-1] * 2 <= max_degree:
        ladder.append(ladder[-1] * 2)
    if ladder[-1] < max_degree:
        ladder.append(max_degree)
    return ladder


class ResolventLadder:
    """Chebyshev problems on the degree ladder, built on first use"""

    def __init__(self, config: ExperimentConfig):
        if config.is_custom or EXAMPLE_PRESETS[config.example]["dim"] != 1:
            raise ConfigError("contour-cost needs a 1D example (1 or 2)")
        self.config = config
        self._problems = {}
        self._residuals = {}

    def problem(self, n: int):
        if n not in self._problems:
            self._problems[n] = build_problem(self.config, resolution=n)
        return self._problems[n]

    def solve(self, n: int, delta: float):
        problem = self.problem(n)
        u, _ = solve_shifted(problem.backend, delta, problem.observable_values())
        return problem, u

    def residual(self, n: int, delta: float) -> float:
        """Relative off-grid residual of the degree-n resolvent at delta"""
        key = (n, delta)
        if key not in self._residuals:
            problem, u = self.solve(n, delta)
            half_width = problem.backend.half_width
            fine = np.linspace(-half_width, half_width, COST_FINE_POINTS)
            self._residuals[key] = problem.backend.relative_residual(delta, u, problem.observable,
                                                                     fine)
        return self._residuals[key]


def cmd_contour_cost(config: ExperimentConfig) -> Dict[str, pd.DataFrame]:
    """Degree n(eps') against delta, plus resolvent profiles"""
    ladder = ResolventLadder(config)
    deltas = COST_DELTAS if config.sweep.deltas is None else config.sweep.deltas
    degrees = degree_ladder(config.sweep.max_degree)

    rows = []
    for delta in deltas:
        for tolerance in config.sweep.tolerances:
            chosen, converged = degrees[-1], False
            for n in degrees:
                if ladder.residual(n, delta) <= tolerance:
                    chosen, converged = n, True
                    break
            if not converged:
                logger.warning("delta=%g: residual %.3g not reached by the degree cap n=%d",
                               delta, tolerance, chosen)
            rows.append({"delta": delta, "epsilon": tolerance, "n": chosen,
                         "converged": converged, "residual": ladder.residual(chosen, delta)})

    profiles = []
    n_profile = min(COST_PROFILE_DEGREE, config.sweep.max_degree)
    for delta in config.sweep.profile_deltas:
        problem, u = ladder.solve(n_profile, delta)
        half_width = problem.backend.half_width
        y = np.linspace(-half_width, half_width, PROFILE_POINTS)
        profiles.append(pd.DataFrame({"delta": delta, "y": y,
                                      "value": problem.backend.evaluate(u, y).real}))

    profile_frame = (pd.concat(profiles, ignore_index=True) if profiles
                     else pd.DataFrame(columns=["delta", "y", "value"]))
    return {
        "contour_cost": pd.DataFrame(rows, columns=["delta", "epsilon", "n", "converged",
                                                    "residual"]),
        "profiles": profile_frame,
    }
