"""
Contour plan for the plan command.
"""

import logging

import pandas as pd

from experiments.setups import build_problem, problem_graph_norm
from utils.data_processing import ExperimentConfig
from utils.errors import ConfigError
from utils.params import plan

logger = logging.getLogger(__name__)


def planning_graph_norm(config: ExperimentConfig) -> float:
    """Configured graph norm, or the example observable's"""
    if config.sweep.graph_norm is not None:
        return config.sweep.graph_norm
    if config.is_custom:
        raise ConfigError("plan for a custom problem needs a graph norm")
    return problem_graph_norm(config, build_problem(config))


def cmd_plan(config: ExperimentConfig) -> pd.DataFrame:
    """One-row table describing the plan for (epsilon, delta, m, t_max)"""
    if config.epsilon is None or config.t_max is None:
        raise ConfigError("plan needs epsilon and t_max")
    norm = planning_graph_norm(config)
    result = plan(config.epsilon, config.delta, config.m, config.t_max, config.constants, norm)
    budget = result.budget(config.constants, norm)
    return pd.DataFrame([{
        "delta": result.delta,
        "h": result.h,
        "N": result.n_half,
        "nodes": result.node_count,
        "m": result.m,
        "t_max": result.t_max,
        "epsilon": config.epsilon,
        "M": config.M,
        "graph_norm": norm,
        "e_disc": budget.e_disc,
        "e_trunc": budget.e_trunc,
        "total": budget.total,
    }])
