"""
Closed-form error bounds for the regularized trapezoidal approximation of exp(At)x.

Two scheme families are covered:

* the second-order scheme with regularizer (delta + a - z)^-2, whose bounds
  depend on the pole offset a and the strip width sigma = min(delta, a);
* the m-th order scheme with regularizer (2 delta - z)^-m, m even.

Each bound is the product of a scalar factor and the graph norm
||r(A)^-1 x||, which callers supply (the operators module computes it).
Exponentials are combined in log space; a factor that overflows saturates
to +inf (no guarantee) and one that underflows saturates to 0.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

from utils.errors import DomainError
from utils.hypergeo import check_order, gamma_ratio, hyp_tail, tail_leading_order

logger = logging.getLogger(__name__)

_LOG_MAX = math.log(1.7976931348623157e308)


@dataclass(frozen=True)
class SemigroupConstants:
    """Growth constants of ||K(t)|| <= M exp(omega t), shifted so omega = 0"""

    M: float = 1.0
    omega: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.M) or self.M < 1:
            raise DomainError(f"growth constant M must be >= 1, got {self.M}")
        if self.omega != 0:
            raise DomainError(f"growth rate must be shifted to omega = 0, got {self.omega}")


@dataclass(frozen=True)
class ErrorBudget:
    """Discretization and truncation bounds at one time"""

    e_disc: float
    e_trunc: float
    total: float
    graph_norm: float

    def __post_init__(self):
        for name in ("e_disc", "e_trunc", "total", "graph_norm"):
            value = getattr(self, name)
            if math.isnan(value) or value < 0:
                raise DomainError(f"{name} must be non-negative, got {value}")

    @classmethod
    def from_parts(cls, e_disc: float, e_trunc: float, graph_norm: float) -> "ErrorBudget":
        return cls(e_disc, e_trunc, e_disc + e_trunc, graph_norm)


def _positive(value, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be positive and finite, got {value}")
    return value


def _non_negative(value, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be non-negative and finite, got {value}")
    return value


def _node_count(n) -> int:
    if isinstance(n, bool) or not float(n).is_integer() or int(n) < 1:
        raise DomainError(f"node count N must be an integer >= 1, got {n!r}")
    return int(n)


def _log_expm1(x: float) -> float:
    """log(e^x - 1) for x > 0 without overflow"""
    return x + math.log(-math.expm1(-x))


def _saturated_exp(log_value: float) -> float:
    if log_value > _LOG_MAX:
        logger.debug("bound factor overflowed (log = %.3g); returning inf", log_value)
        return math.inf
    return math.exp(log_value)


def _scaled(log_factor: float, graph_norm: float) -> float:
    if graph_norm == 0:
        return 0.0
    return _saturated_exp(log_factor + math.log(graph_norm))


def regularizer_strip_integral(delta, m) -> float:
    """max over the strip of int |(delta - b + is)^-m| ds, attained at delta - b = delta/2"""
    delta = _positive(delta, "delta")
    m = check_order(m)
    return 2 * gamma_ratio(m) / (delta / 2) ** (m - 1)


def integrability_constant(c: SemigroupConstants, delta, t, strip_integral, graph_norm) -> float:
    """Uniform integrability constant C_f of the parametrized integrand"""
    delta = _positive(delta, "delta")
    t = _non_negative(t, "t")
    strip_integral = _non_negative(strip_integral, "strip_integral")
    graph_norm = _non_negative(graph_norm, "graph_norm")
    if strip_integral == 0:
        return 0.0
    log_factor = (math.log(2 * c.M / delta) + 1.5 * delta * t - math.log(2 * math.pi)
                  + math.log(strip_integral))
    return _scaled(log_factor, graph_norm)


def trapezoid_discretization(c_f, half_width, h) -> float:
    """Trapezoidal error 2 C_f / (exp(2 pi a / h) - 1) for a strip of half-width a"""
    c_f = _non_negative(c_f, "c_f")
    half_width = _positive(half_width, "half_width")
    h = _positive(h, "h")
    if c_f == 0:
        return 0.0
    return _saturated_exp(math.log(2 * c_f) - _log_expm1(2 * math.pi * half_width / h))


def disc_bound_m(c: SemigroupConstants, delta, m, t, h, graph_norm) -> float:
    """Discretization bound E_D of the m-th order scheme"""
    delta = _positive(delta, "delta")
    m = check_order(m)
    t = _non_negative(t, "t")
    h = _positive(h, "h")
    graph_norm = _non_negative(graph_norm, "graph_norm")
    log_factor = (math.log(c.M) + 1.5 * delta * t - m * math.log(delta)
                  - _log_expm1(delta * math.pi / h)
                  + math.log(2.0 ** (m + 1) * gamma_ratio(m) / math.pi))
    return _scaled(log_factor, graph_norm)


def trunc_bound_m(c: SemigroupConstants, delta, m, t, h, n_half, graph_norm) -> float:
    """Truncation bound E_T of the m-th order scheme"""
    delta = _positive(delta, "delta")
    m = check_order(m)
    t = _non_negative(t, "t")
    h = _positive(h, "h")
    n_half = _node_count(n_half)
    graph_norm = _non_negative(graph_norm, "graph_norm")
    tail = hyp_tail(m, h * n_half / delta)
    if tail == 0:
        return 0.0
    log_factor = (math.log(c.M) + delta * t - m * math.log(delta) - math.log(math.pi)
                  + math.log(tail))
    return _scaled(log_factor, graph_norm)


def trunc_bound_asymptotic(c: SemigroupConstants, delta, m, t, h, n_half, graph_norm) -> float:
    """Leading-order large-N form of trunc_bound_m"""
    delta = _positive(delta, "delta")
    m = check_order(m)
    t = _non_negative(t, "t")
    h = _positive(h, "h")
    n_half = _node_count(n_half)
    graph_norm = _non_negative(graph_norm, "graph_norm")
    y = h * n_half / delta
    if y < 1:
        logger.debug("asymptotic truncation bound used outside its regime (hN/delta = %.3g)", y)
    lead = tail_leading_order(m, y)
    if lead == 0:
        return 0.0
    log_factor = (math.log(c.M) + delta * t - m * math.log(delta) - math.log(math.pi)
                  + math.log(lead))
    return _scaled(log_factor, graph_norm)


def disc_bound_2(c: SemigroupConstants, delta, a, t, h, graph_norm) -> float:
    """Discretization bound E_D of the second-order scheme with pole offset a"""
    delta = _positive(delta, "delta")
    a = _positive(a, "pole offset a")
    t = _non_negative(t, "t")
    h = _positive(h, "h")
    graph_norm = _non_negative(graph_norm, "graph_norm")
    sigma = min(delta, a)
    log_factor = (math.log(c.M) + delta * t - math.log(delta * a) + math.log(4.0)
                  + sigma * t / 2 - _log_expm1(sigma * math.pi / h))
    return _scaled(log_factor, graph_norm)


def trunc_bound_2(c: SemigroupConstants, delta, a, t, h, n_half, graph_norm) -> float:
    """Truncation bound E_T of the second-order scheme with pole offset a"""
    delta = _positive(delta, "delta")
    a = _positive(a, "pole offset a")
    t = _non_negative(t, "t")
    h = _positive(h, "h")
    n_half = _node_count(n_half)
    graph_norm = _non_negative(graph_norm, "graph_norm")
    # 1/2 - arctan(hN/a)/pi, written without the cancellation
    bracket = math.atan2(a, h * n_half) / math.pi
    if bracket == 0:
        return 0.0
    log_factor = math.log(c.M) + delta * t - math.log(delta * a) + math.log(bracket)
    return _scaled(log_factor, graph_norm)


def total_budget(c: SemigroupConstants, delta, m, t, h, n_half, graph_norm,
                 pole_offset: Optional[float] = None) -> ErrorBudget:
    """Sum of discretization and truncation bounds for either scheme"""
    if pole_offset is not None:
        if check_order(m) != 2:
            raise DomainError(f"a pole offset selects the second-order scheme, got m = {m}")
        e_disc = disc_bound_2(c, delta, pole_offset, t, h, graph_norm)
        e_trunc = trunc_bound_2(c, delta, pole_offset, t, h, n_half, graph_norm)
    else:
        e_disc = disc_bound_m(c, delta, m, t, h, graph_norm)
        e_trunc = trunc_bound_m(c, delta, m, t, h, n_half, graph_norm)
    return ErrorBudget.from_parts(e_disc, e_trunc, float(graph_norm))
