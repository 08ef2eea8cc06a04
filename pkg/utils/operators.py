"""
Discretized generator backends.

A backend wraps a real matrix A acting on grid values (dense for spectral
collocation, sparse for finite-difference grids) and exposes the shifted
solves, operator applications and norms the quadrature needs. Backends are
immutable after construction, so solves may run from several threads.
"""

import logging
import math
import warnings
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from numpy.polynomial import chebyshev as cheb
from scipy.linalg import LinAlgError, LinAlgWarning, lu_factor, lu_solve
from scipy.sparse.linalg import splu

from config import CHOP_TOLERANCE
from utils.bounds import SemigroupConstants
from utils.errors import DomainError, SolverError

logger = logging.getLogger(__name__)


class GeneratorBackend:
    """Generator A given by a matrix on a fixed grid"""

    def __init__(self, matrix, constants: Optional[SemigroupConstants] = None,
                 grid: Optional[dict] = None, label: str = "generator"):
        if sp.issparse(matrix):
            matrix = sp.csr_matrix(matrix)
        else:
            matrix = np.atleast_2d(np.asarray(matrix))
        if matrix.shape[0] != matrix.shape[1]:
            raise DomainError(f"generator matrix must be square, got {matrix.shape}")
        self.matrix = matrix
        self.constants = constants or SemigroupConstants()
        self.grid = grid or {}
        self.label = label

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.matrix)

    def apply_A(self, u: np.ndarray) -> np.ndarray:
        """Plain matrix action A u"""
        return self.matrix @ u

    def apply_smooth(self, u: np.ndarray) -> np.ndarray:
        """Action of A used when forming powers of A"""
        return self.apply_A(u)

    def norm(self, u: np.ndarray) -> float:
        """Discrete supremum norm"""
        u = np.asarray(u)
        return float(np.max(np.abs(u))) if u.size else 0.0

    def shifted_solver(self, z: complex):
        """Factor z - A once and return a solve callable"""
        dtype = np.result_type(self.matrix.dtype, np.asarray(z).dtype)
        if self.is_sparse:
            shifted = (z * sp.identity(self.dimension, dtype=dtype, format="csc")
                       - self.matrix.astype(dtype)).tocsc()
            lu = splu(shifted)
            return lu.solve
        shifted = z * np.eye(self.dimension, dtype=dtype) - self.matrix
        factors = lu_factor(shifted, check_finite=True)
        return lambda rhs: lu_solve(factors, rhs)


class ChebyshevBackend(GeneratorBackend):
    """Collocation generator A = diag(F) D on Chebyshev-Lobatto points"""

    def __init__(self, nodes: np.ndarray, velocity: np.ndarray, differentiation: np.ndarray,
                 half_width: float = 1.0, constants: Optional[SemigroupConstants] = None,
                 field: Optional[Callable] = None, label: str = "chebyshev"):
        matrix = velocity[:, None] * differentiation
        super().__init__(matrix, constants=constants, grid={"x": nodes}, label=label)
        self.nodes = nodes
        self.velocity = velocity
        self.half_width = half_width
        self.field = field
        degree = len(nodes) - 1
        # values -> Chebyshev coefficients (discrete cosine transform of type I)
        j = np.arange(degree + 1)
        weights = np.ones(degree + 1)
        weights[[0, -1]] = 0.5
        transform = (2.0 / degree) * np.cos(np.pi * np.outer(j, j) / degree) * weights
        transform[[0, -1]] *= 0.5
        self._to_coefficients = transform
        self._vandermonde = cheb.chebvander(nodes / half_width, degree)

    @property
    def degree(self) -> int:
        return len(self.nodes) - 1

    def coefficients(self, u: np.ndarray) -> np.ndarray:
        """Chebyshev coefficients of the interpolant through the grid values"""
        return self._to_coefficients @ u

    def evaluate(self, u: np.ndarray, points: np.ndarray) -> np.ndarray:
        """Evaluate the interpolant of u at arbitrary points of the domain"""
        return cheb.chebval(np.asarray(points) / self.half_width, self.coefficients(u))

    def derivative_at(self, u: np.ndarray, points: np.ndarray) -> np.ndarray:
        """Derivative of the interpolant of u at arbitrary points"""
        slope = cheb.chebder(self.coefficients(u)) / self.half_width
        return cheb.chebval(np.asarray(points) / self.half_width, slope)

    def apply_smooth(self, u: np.ndarray) -> np.ndarray:
        coeffs = self.coefficients(u)
        scale = np.max(np.abs(coeffs)) if coeffs.size else 0.0
        if scale == 0:
            return np.zeros_like(coeffs)
        significant = np.nonzero(np.abs(coeffs) > CHOP_TOLERANCE * scale)[0]
        coeffs[significant[-1] + 1:] = 0
        slope = cheb.chebder(coeffs) / self.half_width
        return self.velocity * (self._vandermonde[:, :-1] @ slope)

    def relative_residual(self, z: complex, u: np.ndarray, target: Callable, points) -> float:
        """Relative residual of the polynomial solution of (z - A)u = g off the grid"""
        if self.field is None:
            raise DomainError("backend carries no velocity field for off-grid evaluation")
        points = np.asarray(points, dtype=float)
        rhs = target(points)
        residual = (z * self.evaluate(u, points)
                    - self.field(points) * self.derivative_at(u, points) - rhs)
        scale = np.max(np.abs(rhs))
        return float(np.max(np.abs(residual)) / scale) if scale > 0 else math.inf


def solve_shifted(backend: GeneratorBackend, z: complex, x: np.ndarray) -> Tuple[np.ndarray, float]:
    """Solve (z - A) u = x and return u with its recomputed residual norm"""
    z = complex(z)
    if not z.real > 0:
        raise DomainError(f"shift must lie in the right half-plane, got z = {z}")
    x = np.asarray(x)
    if x.shape != (backend.dimension,):
        raise DomainError(f"vector of shape {x.shape} does not match dimension {backend.dimension}")
    if not np.any(x):
        return np.zeros(backend.dimension, dtype=np.result_type(x, z)), 0.0

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", LinAlgWarning)
            u = backend.shifted_solver(z)(x)
    except (LinAlgError, LinAlgWarning, RuntimeError, ValueError) as exc:
        raise SolverError(f"shifted system is singular or ill-posed: {exc}", z=z) from exc
    if not np.all(np.isfinite(u)):
        raise SolverError("shifted solve produced non-finite values", z=z)

    residual = backend.norm(z * u - backend.apply_A(u) - x)
    logger.debug("solve at z=%s residual=%.3e", z, residual)
    return u, residual


def aposteriori_bound(residual_norm: float, delta: float) -> float:
    """Solve-error bound ||u~ - u|| <= ||r|| / delta on the line Re z = delta"""
    if not delta > 0:
        raise DomainError(f"contour location must be positive, got {delta}")
    return residual_norm / delta


def apply_shift_poly(backend: GeneratorBackend, x: np.ndarray, s: float, m: int) -> np.ndarray:
    """(s - A)^m x by m successive applications"""
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"polynomial degree must be an integer >= 1, got {m!r}")
    v = np.asarray(x)
    for _ in range(int(m)):
        v = s * v - backend.apply_smooth(v)
    return v


def graph_norm(backend: GeneratorBackend, x: np.ndarray, delta: float, m: int,
               shift: Optional[float] = None) -> float:
    """||(s - A)^m x|| with s = 2 delta unless another pole is given"""
    s = 2 * delta if shift is None else shift
    return sup_norm(backend, apply_shift_poly(backend, x, s, m))


def sup_norm(backend: GeneratorBackend, x: np.ndarray) -> float:
    """Maximum absolute grid value"""
    return backend.norm(x)
