"""
Trapezoidal quadrature on the vertical contour Re z = delta.

exp(At)x is approximated by

    S(t) = sum_k c_k(t) u_k,    c_k(t) = h/(2 pi) e^{z_k t} / (s - z_k)^m,

with nodes z_k = delta + i h k and resolvent samples u_k = (z_k - A)^-1 x~.
In the pre-regularized strategy x~ = (s - A)^m x is formed once before the
solves; in the post-regularized strategy x~ = x and (s - A)^m is applied to
the sum. Samples are solved once and reused for every t.
"""

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from config import IMAG_TOLERANCE, RESIDUAL_CEILING
from utils.errors import DomainError, SymmetryError
from utils.operators import GeneratorBackend, aposteriori_bound, apply_shift_poly, solve_shifted
from utils.params import ContourPlan

logger = logging.getLogger(__name__)

STRATEGIES = ("pre", "post")


@dataclass(frozen=True)
class QuadratureNode:
    k: int
    z: complex


@dataclass(frozen=True)
class NodeSample:
    """Resolvent sample at node k; mirrored samples hold the conjugate lazily"""

    k: int
    z: complex
    vector: np.ndarray
    residual_norm: float
    mirrored: bool = False

    @property
    def u(self) -> np.ndarray:
        return np.conj(self.vector) if self.mirrored else self.vector


@dataclass(frozen=True)
class ResolventSampleSet:
    """Resolvent samples for one input vector, one per node"""

    plan: ContourPlan
    samples: Tuple[NodeSample, ...]
    x_tag: str
    regularized: bool
    real_input: bool
    rhs_norm: float
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        expected = list(range(-self.plan.n_half, self.plan.n_half + 1))
        if [s.k for s in self.samples] != expected:
            raise DomainError(f"sample set is incomplete: expected one sample per k in "
                              f"[-{self.plan.n_half}, {self.plan.n_half}]")

    @property
    def solve_count(self) -> int:
        return sum(not s.mirrored for s in self.samples)

    @property
    def residuals(self) -> np.ndarray:
        return np.array([s.residual_norm for s in self.samples])

    def aposteriori_bounds(self) -> np.ndarray:
        """Per-node solve-error bounds ||r_k|| / delta"""
        return np.array([aposteriori_bound(s.residual_norm, self.plan.delta) for s in self.samples])

    def weighted_solve_error(self, t: float) -> float:
        """Bound on the quadrature-sum error caused by inexact solves"""
        weights = np.abs(coefficients(self.plan, t))
        return float(weights @ self.aposteriori_bounds())


def nodes(plan: ContourPlan) -> List[QuadratureNode]:
    """Nodes z_k = delta + i h k for k = -N..N"""
    return [QuadratureNode(k, complex(plan.delta, plan.h * k))
            for k in range(-plan.n_half, plan.n_half + 1)]


def coefficient(plan: ContourPlan, k: int, t: float) -> complex:
    """c_k(t) = h/(2 pi) e^{z_k t} / (s - z_k)^m"""
    if abs(k) > plan.n_half:
        raise DomainError(f"node index {k} outside [-{plan.n_half}, {plan.n_half}]")
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    z = complex(plan.delta, plan.h * k)
    return plan.h / (2 * math.pi) * np.exp(z * t) / complex(plan.denominator_offset, -plan.h * k) ** plan.m


def coefficients(plan: ContourPlan, t: float) -> np.ndarray:
    """All coefficients c_k(t), ascending k"""
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    k = np.arange(-plan.n_half, plan.n_half + 1)
    z = plan.delta + 1j * plan.h * k
    return plan.h / (2 * np.pi) * np.exp(z * t) / (plan.denominator_offset - 1j * plan.h * k) ** plan.m


def precompute(backend: GeneratorBackend, x: np.ndarray, plan: ContourPlan, strategy: str = "pre",
               workers: int = 1, symmetry: bool = True, x_tag: str = "x",
               residual_ceiling: float = RESIDUAL_CEILING) -> ResolventSampleSet:
    """Solve (z_k - A) u_k = x~ at every node"""
    if strategy not in STRATEGIES:
        raise DomainError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    x = np.asarray(x)
    real_input = backend.is_real and not np.iscomplexobj(x)
    if symmetry and not real_input:
        logger.info("conjugate symmetry disabled for complex-valued input")
    symmetric = symmetry and real_input

    rhs = apply_shift_poly(backend, x, plan.shift, plan.m) if strategy == "pre" else x
    rhs_norm = backend.norm(rhs)
    solved_ks = range(0 if symmetric else -plan.n_half, plan.n_half + 1)

    def solve(k: int):
        z = complex(plan.delta, plan.h * k)
        u, residual = solve_shifted(backend, z, rhs)
        return NodeSample(k, z, u, residual)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            solved = list(pool.map(solve, solved_ks))
    else:
        solved = [solve(k) for k in solved_ks]

    by_index = {s.k: s for s in solved}
    if symmetric:
        for s in solved[1:]:
            by_index[-s.k] = NodeSample(-s.k, s.z.conjugate(), s.vector, s.residual_norm,
                                        mirrored=True)
    samples = tuple(by_index[k] for k in range(-plan.n_half, plan.n_half + 1))

    notes = []
    ceiling = residual_ceiling * max(rhs_norm, np.finfo(float).tiny)
    for s in solved:
        if s.residual_norm > ceiling:
            notes.append(f"residual {s.residual_norm:.3e} at z = {s.z} exceeds {ceiling:.3e}")
    for note in notes:
        logger.warning(note)

    logger.info("solved %d shifted systems (%s-regularized, %d nodes)",
                len(solved), strategy, plan.node_count)
    return ResolventSampleSet(plan=plan, samples=samples, x_tag=x_tag,
                              regularized=strategy == "pre", real_input=real_input,
                              rhs_norm=rhs_norm, warnings=tuple(notes))


def assemble(samples: ResolventSampleSet, t: float, backend: GeneratorBackend,
             imag_tolerance: float = IMAG_TOLERANCE) -> np.ndarray:
    """Quadrature approximation of exp(At)x from precomputed samples"""
    plan = samples.plan
    if t > plan.t_max:
        warnings.warn(f"t = {t} exceeds the planned window t_max = {plan.t_max}; "
                      "the error budget no longer applies", RuntimeWarning, stacklevel=2)
    c = coefficients(plan, t)
    magnitudes = np.abs(c)
    logger.debug("coefficient dynamic range at t=%g: %.3e", t,
                 magnitudes.max() / max(magnitudes.min(), np.finfo(float).tiny))

    total = np.zeros(backend.dimension, dtype=complex)
    for weight, sample in zip(c, samples.samples):
        total += weight * sample.u
    if not samples.regularized:
        total = apply_shift_poly(backend, total, plan.shift, plan.m)

    if not samples.real_input:
        return total
    imag_norm = backend.norm(total.imag)
    scale = backend.norm(total)
    if imag_norm > imag_tolerance * scale:
        raise SymmetryError(f"imaginary part {imag_norm:.3e} exceeds {imag_tolerance:g} "
                            f"of the sum norm {scale:.3e} at t = {t}")
    return total.real.copy()
