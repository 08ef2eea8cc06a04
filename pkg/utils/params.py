"""
Quadrature parameter selection.

Given a target accuracy eps over [0, T], the spacing h is chosen so that the
discretization bound equals eps/2 at T exactly, and the node count N so that
the leading-order truncation bound is at most eps/2. For a fixed N the
spacing can instead be optimized numerically against the total bound.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from config import (
    DEFAULT_MAX_NODES,
    GOLDEN_RTOL,
    NODE_GROWTH,
    SPACING_BRACKET,
    SPACING_GRID_POINTS,
)
from utils.bounds import (
    ErrorBudget,
    SemigroupConstants,
    disc_bound_m,
    total_budget,
    trunc_bound_m,
)
from utils.errors import DomainError, PlanInfeasibleError
from utils.hypergeo import check_order, gamma_ratio

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ContourPlan:
    """Quadrature parameters: nodes z_k = delta + i h k for |k| <= n_half"""

    delta: float
    h: float
    n_half: int
    m: int
    t_max: float
    pole_offset: Optional[float] = None

    def __post_init__(self):
        for name in ("delta", "h", "t_max"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise DomainError(f"plan field {name} must be positive, got {value}")
        if isinstance(self.n_half, bool) or int(self.n_half) != self.n_half or self.n_half < 1:
            raise DomainError(f"plan field n_half must be an integer >= 1, got {self.n_half!r}")
        check_order(self.m)
        if self.pole_offset is not None:
            if not math.isfinite(self.pole_offset) or self.pole_offset <= 0:
                raise DomainError(f"pole offset must be positive, got {self.pole_offset}")
            if self.m != 2:
                raise DomainError("the pole-offset scheme is second order (m = 2)")

    @property
    def node_count(self) -> int:
        return 2 * self.n_half + 1

    @property
    def shift(self) -> float:
        """Pole s of the regularizer (s - z)^-m"""
        if self.pole_offset is not None:
            return self.delta + self.pole_offset
        return 2 * self.delta

    @property
    def denominator_offset(self) -> float:
        """Real part of s - z_k on the contour"""
        return self.shift - self.delta

    def budget(self, c: SemigroupConstants, graph_norm: float, t: Optional[float] = None) -> ErrorBudget:
        """Error budget of this plan at time t (defaults to t_max)"""
        t = self.t_max if t is None else t
        return total_budget(c, self.delta, self.m, t, self.h, self.n_half, graph_norm,
                            pole_offset=self.pole_offset)


def _check_tolerance(eps) -> float:
    eps = float(eps)
    if not math.isfinite(eps) or eps <= 0:
        raise DomainError(f"target accuracy must be positive, got {eps}")
    return eps


def spacing_for_tolerance(eps, delta, m, t_max, c: SemigroupConstants, graph_norm) -> float:
    """Spacing h at which the discretization bound equals eps/2 at t_max"""
    eps = _check_tolerance(eps)
    m = check_order(m)
    if delta <= 0 or t_max <= 0:
        raise DomainError(f"delta and t_max must be positive, got {delta}, {t_max}")
    if graph_norm < 0:
        raise DomainError(f"graph norm must be non-negative, got {graph_norm}")
    if graph_norm == 0:
        return float(SPACING_BRACKET[1] * delta)
    # log of (2/eps) * M e^{3 delta T/2} / delta^m * (2^{m+1} G / pi) * norm
    log_ratio = (math.log(2 / eps) + math.log(c.M) + 1.5 * delta * t_max - m * math.log(delta)
                 + math.log(2.0 ** (m + 1) * gamma_ratio(m) / math.pi) + math.log(graph_norm))
    # log(1 + e^x) evaluated without overflow
    log_term = np.logaddexp(0.0, log_ratio)
    return float(math.pi * delta / log_term)


def nodes_for_tolerance(eps, delta, m, t_max, c: SemigroupConstants, graph_norm, h,
                        max_nodes: int = DEFAULT_MAX_NODES) -> int:
    """Node count N at which the asymptotic truncation bound is at most eps/2"""
    eps = _check_tolerance(eps)
    m = check_order(m)
    if h <= 0 or delta <= 0:
        raise DomainError(f"h and delta must be positive, got {h}, {delta}")
    if graph_norm < 0:
        raise DomainError(f"graph norm must be non-negative, got {graph_norm}")
    if graph_norm == 0:
        return 1
    log_inner = (math.log(2 / eps) + math.log(c.M) + delta * t_max - math.log(math.pi * delta)
                 + math.log(graph_norm) - math.log(m - 1))
    log_n = log_inner / (m - 1) - math.log(h)
    if log_n > math.log(max_nodes):
        raise PlanInfeasibleError(
            f"accuracy {eps:g} needs more than {max_nodes} nodes (log N = {log_n:.3g})")
    return max(1, math.ceil(math.exp(log_n)))


def _budget_at(h, n_half, delta, m, t, c, graph_norm, pole_offset) -> float:
    return total_budget(c, delta, m, t, h, n_half, graph_norm, pole_offset=pole_offset).total


def optimize_spacing(n_half, delta, m, t, c: SemigroupConstants, graph_norm,
                     pole_offset: Optional[float] = None,
                     bracket=SPACING_BRACKET, rtol: float = GOLDEN_RTOL) -> float:
    """Spacing h* minimizing the total bound for a fixed node count"""
    if n_half < 1:
        raise DomainError(f"node count must be >= 1, got {n_half}")
    grid = np.geomspace(bracket[0] * delta, bracket[1] * delta, SPACING_GRID_POINTS)
    values = np.array([_budget_at(h, n_half, delta, m, t, c, graph_norm, pole_offset)
                       for h in grid])
    if not np.isfinite(values).any():
        raise PlanInfeasibleError(f"error budget is infinite for every spacing (N = {n_half})")

    best = int(np.argmin(values))
    h_best, v_best = float(grid[best]), float(values[best])
    if 0 < best < len(grid) - 1 and values[best - 1] > v_best < values[best + 1]:
        result = minimize_scalar(
            _budget_at,
            bracket=(grid[best - 1], grid[best], grid[best + 1]),
            args=(n_half, delta, m, t, c, graph_norm, pole_offset),
            method="golden",
            options={"xtol": rtol},
        )
        if result.success and result.fun <= v_best:
            h_best = float(result.x)
    else:
        logger.debug("spacing optimum at the edge of the search grid (h = %.4g)", h_best)
    return h_best


def plan(eps, delta, m, t_max, c: SemigroupConstants, graph_norm,
         max_nodes: int = DEFAULT_MAX_NODES) -> ContourPlan:
    """Spacing and node count meeting accuracy eps uniformly on [0, t_max]"""
    h = spacing_for_tolerance(eps, delta, m, t_max, c, graph_norm)
    n_half = nodes_for_tolerance(eps, delta, m, t_max, c, graph_norm, h, max_nodes=max_nodes)

    # The node formula is asymptotic; confirm against the exact tail bound
    while trunc_bound_m(c, delta, m, t_max, h, n_half, graph_norm) > eps / 2 * (1 + 1e-12):
        n_half = math.ceil(n_half * NODE_GROWTH)
        if n_half > max_nodes:
            raise PlanInfeasibleError(f"accuracy {eps:g} needs more than {max_nodes} nodes")

    result = ContourPlan(delta=float(delta), h=h, n_half=int(n_half), m=check_order(m),
                         t_max=float(t_max))
    logger.info("planned delta=%g m=%d h=%.6g N=%d for eps=%g", delta, result.m, h, n_half, eps)
    logger.debug("disc bound at T: %.3e", disc_bound_m(c, delta, m, t_max, h, graph_norm))
    return result
