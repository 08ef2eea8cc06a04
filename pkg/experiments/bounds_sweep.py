"""
Error-bound sweeps for the bounds command.

Three sweep kinds:

* nodes: bound against N with a fixed and an optimized spacing, for each m
  (or for the second-order scheme when a pole offset is configured);
* pole: bound against the pole offset a of the second-order scheme with the
  spacing optimized per (a, N);
* plan: planned spacing and node count against each accuracy eps, next to
  the optimized spacing at the planned N.
"""

import logging
from typing import List

import pandas as pd

from config import (
    BOUND_SWEEP_N,
    CONVERGENCE_ORDERS,
    PLAN_SWEEP_EPSILONS,
    PLAN_SWEEP_MAX_NODES,
    POLE_SWEEP_A,
    POLE_SWEEP_N,
)
from utils.bounds import total_budget
from utils.data_processing import ExperimentConfig
from utils.errors import ConfigError
from utils.params import optimize_spacing, plan

logger = logging.getLogger(__name__)

COLUMNS = ["kind", "h_mode", "m", "a", "N", "h", "t", "delta", "M", "graph_norm", "epsilon",
           "e_disc", "e_trunc", "total"]


def _or_default(values, default):
    """Configured list, or the default when the key is absent"""
    return default if values is None else values


def model_graph_norm(config: ExperimentConfig, m: int, a=None) -> float:
    """Graph-norm normalization for bound-only sweeps"""
    model = config.sweep.norm_model
    if config.sweep.graph_norm is not None and model == "unit":
        return config.sweep.graph_norm
    if model == "unit":
        return 1.0
    if model == "typical":
        return 2.0 ** (m - 2)
    if model == "smooth":
        return (2 * config.delta) ** (m - 2)
    if a is None:
        raise ConfigError("norm_model = pole needs a pole offset")
    return (config.delta + a) ** 2


def _row(config, kind, h_mode, m, a, n_half, h, t, norm, epsilon=None) -> dict:
    budget = total_budget(config.constants, config.delta, m, t, h, n_half, norm, pole_offset=a)
    return {
        "kind": kind, "h_mode": h_mode, "m": m, "a": a, "N": n_half, "h": h, "t": t,
        "delta": config.delta, "M": config.M, "graph_norm": norm, "epsilon": epsilon,
        "e_disc": budget.e_disc, "e_trunc": budget.e_trunc, "total": budget.total,
    }


def sweep_nodes(config: ExperimentConfig) -> List[dict]:
    """Bound against N, fixed versus optimized spacing"""
    t = config.sweep_time
    a = config.pole_offset
    orders = [2] if a is not None else _or_default(config.sweep.m_values, [config.m])
    n_values = _or_default(config.sweep.n_values, BOUND_SWEEP_N)
    rows = []
    for m in orders:
        norm = model_graph_norm(config, m, a)
        for n_half in n_values:
            if config.h is not None and not isinstance(config.h, str):
                rows.append(_row(config, "nodes", "fixed", m, a, n_half, config.h, t, norm))
            h = optimize_spacing(n_half, config.delta, m, t, config.constants, norm, pole_offset=a)
            rows.append(_row(config, "nodes", "optimal", m, a, n_half, h, t, norm))
    return rows


def sweep_pole(config: ExperimentConfig) -> List[dict]:
    """Bound of the second-order scheme against the pole offset a"""
    t = config.sweep_time
    n_values = _or_default(config.sweep.n_values, POLE_SWEEP_N)
    rows = []
    for n_half in n_values:
        for a in _or_default(config.sweep.a_values, POLE_SWEEP_A):
            norm = model_graph_norm(config, 2, a)
            h = optimize_spacing(n_half, config.delta, 2, t, config.constants, norm, pole_offset=a)
            rows.append(_row(config, "pole", "optimal", 2, a, n_half, h, t, norm))
    return rows


def sweep_plan(config: ExperimentConfig) -> List[dict]:
    """Planned parameters against accuracy, with the optimized spacing at the planned N"""
    t = config.sweep_time
    orders = _or_default(config.sweep.m_values, CONVERGENCE_ORDERS)
    rows = []
    for m in orders:
        norm = model_graph_norm(config, m)
        for eps in _or_default(config.sweep.epsilons, PLAN_SWEEP_EPSILONS):
            planned = plan(eps, config.delta, m, t, config.constants, norm,
                           max_nodes=PLAN_SWEEP_MAX_NODES)
            rows.append(_row(config, "plan", "planned", m, None, planned.n_half, planned.h, t,
                             norm, epsilon=eps))
            h = optimize_spacing(planned.n_half, config.delta, m, t, config.constants, norm)
            rows.append(_row(config, "plan", "optimal", m, None, planned.n_half, h, t, norm,
                             epsilon=eps))
    return rows


def cmd_bounds(config: ExperimentConfig) -> pd.DataFrame:
    """Bound sweep selected by [sweep] kind"""
    sweeps = {"nodes": sweep_nodes, "pole": sweep_pole, "plan": sweep_plan}
    rows = sweeps[config.sweep.kind](config)
    logger.info("bounds sweep '%s' produced %d rows", config.sweep.kind, len(rows))
    return pd.DataFrame(rows, columns=COLUMNS)
