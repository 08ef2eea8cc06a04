"""
Reference flows and observables for the Koopman examples.

The pullback [K(t)g](x) = g(phi(x, t)) of an observable along an exact flow
is the reference every computed semigroup action is compared against. The
ODE oracle integrates x' = F(x) independently and is used to validate the
closed forms.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np
from scipy.integrate import solve_ivp

from utils.errors import DomainError, SolverError

logger = logging.getLogger(__name__)


def flow_example1(x, t):
    """Contraction x' = -x: phi(x, t) = x e^-t"""
    return np.asarray(x, dtype=float) * math.exp(-t)


def flow_example2(x, t):
    """Flow of x' = 2x - 8x^3 with stable fixed points at +-1/2"""
    x = np.asarray(x, dtype=float)
    # x e^{2t} / sqrt(1 + 4x^2 (e^{4t} - 1)), scaled by e^{-2t} to stay finite
    decay = math.exp(-4 * t)
    return x / np.sqrt(decay + 4 * x * x * (1 - decay))


def flow_example3(x, t):
    """Rotation exp(Bt) x with B = [[0, 1], [-1, 0]]"""
    x = np.asarray(x, dtype=float)
    c, s = math.cos(t), math.sin(t)
    return np.stack([c * x[0] + s * x[1], -s * x[0] + c * x[1]])


def flow_example4(x, t):
    """Tensor-product copy of flow_example2"""
    x = np.asarray(x, dtype=float)
    return np.stack([flow_example2(x[0], t), flow_example2(x[1], t)])


def velocity_example1(x):
    return -np.asarray(x, dtype=float)


def velocity_example2(x):
    x = np.asarray(x, dtype=float)
    return 2 * x - 8 * x ** 3


def velocity_example3(x1, x2):
    return np.asarray(x2, dtype=float), -np.asarray(x1, dtype=float)


def velocity_example4(x1, x2):
    return velocity_example2(x1), velocity_example2(x2)


def observable_example1(x):
    x = np.asarray(x, dtype=float)
    return np.sin(np.pi * x) * (1 - x * x)


def observable_example2(x):
    x = np.asarray(x, dtype=float)
    return 1 - x * x


def observable_gaussian(x1, x2):
    return np.exp(-2 * np.asarray(x1, dtype=float) ** 2 - 0.5 * np.asarray(x2, dtype=float) ** 2)


@dataclass(frozen=True)
class FlowMap:
    """Exact flow phi(x, t) with the velocity it integrates"""

    dim: int
    evaluate: Callable
    velocity: Callable
    invariant_half_width: Optional[float] = None
    name: str = "flow"

    def __call__(self, x, t):
        if t < 0:
            raise DomainError(f"flows are evaluated forward in time, got t = {t}")
        return self.evaluate(x, t)

    def velocity_vector(self, x: np.ndarray) -> np.ndarray:
        """Velocity as a single array, the form the ODE oracle integrates"""
        if self.dim == 1:
            return np.atleast_1d(self.velocity(x[0]))
        return np.stack(self.velocity(x[0], x[1]))


FLOWS: Dict[int, FlowMap] = {
    1: FlowMap(1, flow_example1, velocity_example1, invariant_half_width=1.0, name="example1"),
    2: FlowMap(1, flow_example2, velocity_example2, invariant_half_width=1.0, name="example2"),
    3: FlowMap(2, flow_example3, velocity_example3, name="example3"),
    4: FlowMap(2, flow_example4, velocity_example4, invariant_half_width=1.0, name="example4"),
}

OBSERVABLES: Dict[int, Callable] = {
    1: observable_example1,
    2: observable_example2,
    3: observable_gaussian,
    4: observable_gaussian,
}


def exact_pullback(flow: FlowMap, g: Callable, x, t, half_width: Optional[float] = None):
    """[K(t)g](x) = g(phi(x, t)); half_width bounds the domain of g when given"""
    image = flow(x, t)
    if half_width is not None and np.any(np.abs(image) > half_width * (1 + 1e-12)):
        raise DomainError(f"{flow.name} leaves the domain [-{half_width}, {half_width}] of g "
                          f"by t = {t}")
    if flow.dim == 1:
        return g(image)
    return g(image[0], image[1])


def ode_oracle(F: Callable, x0, t, tol: float = 1e-12):
    """Integrate x' = F(x) from x0 over [0, t] with an adaptive 8th-order method"""
    if not 1e-14 <= tol <= 1e-6:
        raise DomainError(f"oracle tolerance must lie in [1e-14, 1e-6], got {tol}")
    y0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if t == 0:
        return y0.copy()
    solution = solve_ivp(lambda _, y: F(y), (0.0, float(t)), y0, method="DOP853",
                         rtol=tol, atol=tol)
    if not solution.success:
        raise SolverError(f"ODE oracle failed: {solution.message}")
    return solution.y[:, -1]
