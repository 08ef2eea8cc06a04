"""
Convergence study for the converge command: error at a fixed time against N
for several regularizer orders, with the spacing optimized per N.
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd

from config import CONVERGENCE_N, CONVERGENCE_N_LONG, CONVERGENCE_ORDERS, EXAMPLE_PRESETS
from experiments.setups import build_problem, problem_graph_norm
from utils.contour import assemble, precompute
from utils.data_processing import ExperimentConfig
from utils.operators import sup_norm
from utils.params import ContourPlan, optimize_spacing

logger = logging.getLogger(__name__)


def fit_slope(n_values, errors, floor: float) -> Optional[Tuple[float, int]]:
    """Log-log slope over the leading run of errors at least 10x above the floor"""
    n_values = np.asarray(n_values, dtype=float)
    errors = np.asarray(errors, dtype=float)
    positive = errors[errors > 0]
    if positive.size < 2:
        return None
    # a flattened tail marks the solver floor
    if errors[-1] >= errors[-2] / 3:
        floor = max(floor, positive.min())
    threshold = 10 * floor
    usable = 0
    while usable < len(errors) and errors[usable] >= threshold:
        usable += 1
    if usable < 2:
        return None
    slope = np.polyfit(np.log(n_values[:usable]), np.log(errors[:usable]), 1)[0]
    return float(slope), usable


def default_node_counts(config: ExperimentConfig):
    """Node ladder reaching at least the preset node count of the example"""
    preset_n = EXAMPLE_PRESETS.get(config.example, {}).get("n", 0)
    return CONVERGENCE_N_LONG if preset_n > CONVERGENCE_N[-1] else CONVERGENCE_N


def cmd_converge(config: ExperimentConfig, workers: int = 1) -> Dict[str, pd.DataFrame]:
    """Error against node count for each regularizer order"""
    problem = build_problem(config)
    backend = problem.backend
    g = problem.observable_values()
    t = config.sweep_time
    exact = problem.exact(t)
    orders = CONVERGENCE_ORDERS if config.sweep.m_values is None else config.sweep.m_values
    n_values = config.sweep.n_values
    if n_values is None:
        n_values = default_node_counts(config)

    rows, slopes = [], []
    for m in orders:
        norm = problem_graph_norm(config, problem, m=m)
        errors = []
        for n_half in n_values:
            h = optimize_spacing(n_half, config.delta, m, t, config.constants, norm)
            contour_plan = ContourPlan(delta=config.delta, h=h, n_half=n_half, m=m, t_max=t)
            samples = precompute(backend, g, contour_plan, strategy=config.strategy,
                                 workers=workers, symmetry=config.symmetry)
            error = sup_norm(backend, assemble(samples, t, backend) - exact)
            budget = contour_plan.budget(config.constants, norm, t)
            errors.append(error)
            rows.append({"m": m, "N": n_half, "h": h, "t": t, "error": error,
                         "bound": budget.total, "e_disc": budget.e_disc,
                         "e_trunc": budget.e_trunc, "M": config.M, "delta": config.delta,
                         "graph_norm": norm})
            logger.debug("m=%d N=%d h=%.4g error=%.3e", m, n_half, h, error)
        fitted = fit_slope(n_values, errors, config.sweep.error_floor)
        if fitted is not None:
            slopes.append({"m": m, "slope": fitted[0], "n_points": fitted[1]})
            logger.info("m=%d fitted slope %.2f over %d points", m, *fitted)

    columns = ["m", "N", "h", "t", "error", "bound", "e_disc", "e_trunc", "M", "delta",
               "graph_norm"]
    return {
        "converge": pd.DataFrame(rows, columns=columns),
        "slopes": pd.DataFrame(slopes, columns=["m", "slope", "n_points"]),
    }
