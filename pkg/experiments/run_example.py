"""
Semigroup run for the run command: precompute resolvent samples once,
assemble on a time grid and compare with the exact pullback.
"""

import logging
from typing import Dict

import numpy as np
import pandas as pd

from experiments.setups import build_problem, problem_graph_norm, resolve_plan
from utils.contour import assemble, precompute
from utils.data_processing import ExperimentConfig, grid_frame, save_samples
from utils.operators import sup_norm

logger = logging.getLogger(__name__)


def time_grid(t_max: float, points: int) -> np.ndarray:
    """Evaluation times on [0, t_max]; a single point means t_max alone"""
    if points == 1:
        return np.array([t_max])
    return np.linspace(0.0, t_max, points)


def cmd_run(config: ExperimentConfig, workers: int = 1) -> Dict[str, pd.DataFrame]:
    """Run the configured example and tabulate error against bound"""
    problem = build_problem(config)
    backend = problem.backend
    g = problem.observable_values()
    norm = problem_graph_norm(config, problem)
    contour_plan = resolve_plan(config, norm)

    samples = precompute(backend, g, contour_plan, strategy=config.strategy, workers=workers,
                         symmetry=config.symmetry, x_tag=f"example{config.example}")
    if config.checkpoint:
        save_samples(samples, config.checkpoint)

    rows = []
    computed = exact = None
    for t in time_grid(config.t_max, config.sweep.t_points):
        computed = assemble(samples, t, backend)
        exact = problem.exact(t)
        error = sup_norm(backend, computed - exact)
        budget = contour_plan.budget(config.constants, norm, t)
        rows.append({
            "t": t,
            "error": error,
            "relative_error": error / max(sup_norm(backend, exact), np.finfo(float).tiny),
            "bound": budget.total,
            "e_disc": budget.e_disc,
            "e_trunc": budget.e_trunc,
            "solve_error": samples.weighted_solve_error(t) if samples.regularized else np.nan,
            "M": config.M,
            "delta": contour_plan.delta,
            "m": contour_plan.m,
            "a": contour_plan.pole_offset,
            "h": contour_plan.h,
            "N": contour_plan.n_half,
            "graph_norm": norm,
        })
    run = pd.DataFrame(rows)
    logger.info("max error %.3e against max bound %.3e", run["error"].max(), run["bound"].max())

    residuals = pd.DataFrame({
        "k": [s.k for s in samples.samples],
        "z_re": [s.z.real for s in samples.samples],
        "z_im": [s.z.imag for s in samples.samples],
        "residual": samples.residuals,
        "aposteriori": samples.aposteriori_bounds(),
    })
    tables = {"run": run, "residuals": residuals}
    if config.solution:
        tables["solution"] = grid_frame(problem.coordinates, {"computed": computed, "exact": exact})
    return tables
