"""
Koopman generator discretizations A = F(x) . grad.

1D fields use Chebyshev collocation on n+1 Lobatto points of [-L, L].
2D fields use second-order finite differences on an equispaced grid of
[-L, L]^2: centered stencils inside, one-sided second-order stencils on the
boundary, and no boundary-condition rows.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Tuple, Union

import numpy as np
import scipy.sparse as sp

from utils.bounds import SemigroupConstants
from utils.errors import DomainError
from utils.operators import ChebyshevBackend, GeneratorBackend

logger = logging.getLogger(__name__)

# Tangential or inward velocity allowed up to this slack at the boundary
_INWARD_SLACK = 1e-12


@dataclass(frozen=True)
class DiscreteField:
    """Velocity field F on [-L, L]^dim together with its grid resolution"""

    dim: int
    velocity: Callable
    resolution: Union[int, Tuple[int, int]]
    half_width: float = 1.0
    name: str = "field"

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise DomainError(f"only 1D and 2D fields are supported, got dim = {self.dim}")
        if not math.isfinite(self.half_width) or self.half_width <= 0:
            raise DomainError(f"domain half-width must be positive, got {self.half_width}")

    @property
    def shape(self) -> Tuple[int, ...]:
        """Grid points per axis"""
        if self.dim == 1:
            return (int(self.resolution) + 1,)
        if isinstance(self.resolution, (tuple, list)):
            return tuple(int(r) for r in self.resolution)
        return (int(self.resolution), int(self.resolution))

    def axes(self) -> Tuple[np.ndarray, ...]:
        """Node coordinates per axis"""
        if self.dim == 1:
            return (chebyshev_points(self.shape[0] - 1) * self.half_width,)
        return tuple(np.linspace(-self.half_width, self.half_width, n) for n in self.shape)

    def velocity_values(self) -> Tuple[np.ndarray, ...]:
        """Velocity components on the grid nodes (flattened, C order)"""
        if self.dim == 1:
            (x,) = self.axes()
            values = (np.broadcast_to(np.asarray(self.velocity(x), dtype=float), x.shape),)
        else:
            x1, x2 = np.meshgrid(*self.axes(), indexing="ij")
            f1, f2 = self.velocity(x1, x2)
            values = tuple(np.broadcast_to(np.asarray(f, dtype=float), x1.shape).ravel()
                           for f in (f1, f2))
        if not all(np.all(np.isfinite(v)) for v in values):
            raise DomainError(f"velocity of {self.name} is not finite on every grid node")
        return values

    def inward_pointing(self) -> Dict[str, bool]:
        """Whether F points into (or along) the domain on each boundary piece"""
        if self.dim == 1:
            (f,) = self.velocity_values()
            return {"left": bool(f[-1] >= -_INWARD_SLACK), "right": bool(f[0] <= _INWARD_SLACK)}
        f1, f2 = (v.reshape(self.shape) for v in self.velocity_values())
        return {
            "left": bool(np.all(f1[0, :] >= -_INWARD_SLACK)),
            "right": bool(np.all(f1[-1, :] <= _INWARD_SLACK)),
            "bottom": bool(np.all(f2[:, 0] >= -_INWARD_SLACK)),
            "top": bool(np.all(f2[:, -1] <= _INWARD_SLACK)),
        }


def chebyshev_points(n: int) -> np.ndarray:
    """Chebyshev-Lobatto points cos(j pi / n), j = 0..n, in descending order"""
    # sine form keeps the points exactly symmetric about 0
    return np.sin(np.pi * np.arange(n, -n - 1, -2) / (2 * n))


def chebyshev_differentiation(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Points and differentiation matrix on n+1 Chebyshev-Lobatto points of [-1, 1]"""
    if n < 1:
        raise DomainError(f"Chebyshev degree must be >= 1, got {n}")
    x = chebyshev_points(n)
    c = np.ones(n + 1)
    c[[0, -1]] = 2.0
    c *= (-1.0) ** np.arange(n + 1)
    dx = x[:, None] - x[None, :]
    D = np.outer(c, 1.0 / c) / (dx + np.eye(n + 1))
    # Diagonal by the negative-sum trick: rows annihilate constants
    D -= np.diag(D.sum(axis=1))
    return x, D


def finite_difference_matrix(n: int, spacing: float) -> sp.csr_matrix:
    """Second-order first-derivative stencil with one-sided boundary rows"""
    if n < 3:
        raise DomainError(f"finite differences need at least 3 points per axis, got {n}")
    D = sp.diags([-0.5, 0.5], [-1, 1], shape=(n, n), format="lil")
    D[0, 0:3] = [-1.5, 2.0, -0.5]
    D[n - 1, n - 3:n] = [0.5, -2.0, 1.5]
    return (D / spacing).tocsr()


def build_koopman_1d(field: DiscreteField, constants: SemigroupConstants = None) -> ChebyshevBackend:
    """Chebyshev collocation backend A = diag(F(x_i)) D"""
    if field.dim != 1:
        raise DomainError(f"build_koopman_1d needs a 1D field, got dim = {field.dim}")
    n = field.shape[0] - 1
    if n < 2:
        raise DomainError(f"Chebyshev resolution must be >= 2, got {n}")
    inward = field.inward_pointing()
    if not all(inward.values()):
        outward = [side for side, ok in inward.items() if not ok]
        raise DomainError(f"{field.name} points outward at the {', '.join(outward)} boundary; "
                          "boundary data would be required")

    x, D = chebyshev_differentiation(n)
    (velocity,) = field.velocity_values()
    backend = ChebyshevBackend(x * field.half_width, np.array(velocity), D / field.half_width,
                               half_width=field.half_width, constants=constants,
                               field=field.velocity, label=field.name)
    logger.debug("built Chebyshev backend for %s with %d points", field.name, n + 1)
    return backend


def build_koopman_2d(field: DiscreteField, constants: SemigroupConstants = None) -> GeneratorBackend:
    """Sparse finite-difference backend A = F1 d/dx1 + F2 d/dx2"""
    if field.dim != 2:
        raise DomainError(f"build_koopman_2d needs a 2D field, got dim = {field.dim}")
    n1, n2 = field.shape
    if min(n1, n2) < 3:
        raise DomainError(f"resolution must be >= 3 per axis, got {field.shape}")

    x1, x2 = field.axes()
    d1 = sp.kron(finite_difference_matrix(n1, x1[1] - x1[0]), sp.identity(n2))
    d2 = sp.kron(sp.identity(n1), finite_difference_matrix(n2, x2[1] - x2[0]))
    f1, f2 = field.velocity_values()
    matrix = (sp.diags(f1) @ d1 + sp.diags(f2) @ d2).tocsr()

    inward = field.inward_pointing()
    if not all(inward.values()):
        logger.info("%s is not inward-pointing on every edge; relying on a compactly supported "
                    "observable", field.name)
    grid = {"x1": x1, "x2": x2, "shape": (n1, n2)}
    logger.debug("built finite-difference backend for %s on a %dx%d grid (%d nonzeros)",
                 field.name, n1, n2, matrix.nnz)
    return GeneratorBackend(matrix, constants=constants, grid=grid, label=field.name)


def grid_points(field: DiscreteField) -> Tuple[np.ndarray, ...]:
    """Flattened node coordinates matching the backend's vector ordering"""
    if field.dim == 1:
        return field.axes()
    x1, x2 = np.meshgrid(*field.axes(), indexing="ij")
    return x1.ravel(), x2.ravel()
