"""
Example problems shared by the experiment commands.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from config import EXAMPLE_PRESETS
from utils.bounds import SemigroupConstants
from utils.data_processing import AUTO, OPTIMAL, ExperimentConfig
from utils.discretize import DiscreteField, build_koopman_1d, build_koopman_2d, grid_points
from utils.errors import ConfigError
from utils.flows import FLOWS, OBSERVABLES, FlowMap, exact_pullback
from utils.operators import GeneratorBackend, graph_norm
from utils.params import ContourPlan, nodes_for_tolerance, optimize_spacing, plan, spacing_for_tolerance

logger = logging.getLogger(__name__)


@dataclass
class ExampleProblem:
    """Discretized generator, observable and exact flow for one example"""

    example: int
    backend: GeneratorBackend
    observable: Callable
    flow: FlowMap
    coordinates: Dict[str, np.ndarray]

    @property
    def points(self):
        return tuple(self.coordinates.values())

    def observable_values(self) -> np.ndarray:
        return np.asarray(self.observable(*self.points), dtype=float)

    def exact(self, t: float) -> np.ndarray:
        """Exact pullback K(t)g on the grid"""
        x = self.points[0] if self.flow.dim == 1 else np.stack(self.points)
        return np.asarray(exact_pullback(self.flow, self.observable, x, t), dtype=float)


def build_problem(config: ExperimentConfig, resolution=None) -> ExampleProblem:
    """Discretize the configured example"""
    if config.is_custom:
        raise ConfigError("this command needs one of the numbered examples, not custom")
    preset = EXAMPLE_PRESETS[config.example]
    flow = FLOWS[config.example]
    field = DiscreteField(
        dim=preset["dim"],
        velocity=flow.velocity,
        resolution=resolution or config.resolution or preset["resolution"],
        half_width=config.half_width or preset["half_width"],
        name=f"example{config.example}",
    )
    constants = config.constants
    if field.dim == 1:
        backend = build_koopman_1d(field, constants=constants)
        coordinates = {"x": grid_points(field)[0]}
    else:
        backend = build_koopman_2d(field, constants=constants)
        x1, x2 = grid_points(field)
        coordinates = {"x1": x1, "x2": x2}
    logger.info("example %d discretized with %d unknowns", config.example, backend.dimension)
    return ExampleProblem(config.example, backend, OBSERVABLES[config.example], flow, coordinates)


def regularizer_shift(delta: float, pole_offset=None) -> float:
    """Pole s of the regularizer for either scheme"""
    return delta + pole_offset if pole_offset is not None else 2 * delta


def problem_graph_norm(config: ExperimentConfig, problem: ExampleProblem, m=None) -> float:
    """||(s - A)^m g|| for the configured scheme"""
    m = config.m if m is None else m
    shift = regularizer_shift(config.delta, config.pole_offset)
    return graph_norm(problem.backend, problem.observable_values(), config.delta, m, shift=shift)


def resolve_plan(config: ExperimentConfig, norm: float, constants: SemigroupConstants = None) -> ContourPlan:
    """Contour plan from fixed, auto or optimal spacing and node settings"""
    constants = constants or config.constants
    if config.t_max is None:
        raise ConfigError("[scheme] t_max is required for this command")
    if config.n_half is None:
        raise ConfigError("[scheme] n is required (a number, or auto with epsilon)")
    if config.pole_offset is not None and AUTO in (config.h, config.n_half):
        raise ConfigError("automatic planning covers the m-th order scheme only; "
                          "give n and h (or h = optimal) with pole_offset")

    if config.h == AUTO and config.n_half == AUTO:
        return plan(config.epsilon, config.delta, config.m, config.t_max, constants, norm)
    if config.h == AUTO:
        h = spacing_for_tolerance(config.epsilon, config.delta, config.m, config.t_max,
                                  constants, norm)
        n_half = config.n_half
    elif config.n_half == AUTO:
        h = config.h
        n_half = nodes_for_tolerance(config.epsilon, config.delta, config.m, config.t_max,
                                     constants, norm, h)
    elif config.h == OPTIMAL:
        n_half = config.n_half
        h = optimize_spacing(n_half, config.delta, config.m, config.t_max, constants, norm,
                             pole_offset=config.pole_offset)
    else:
        h, n_half = config.h, config.n_half
    result = ContourPlan(delta=config.delta, h=float(h), n_half=int(n_half), m=config.m,
                         t_max=config.t_max, pole_offset=config.pole_offset)
    logger.info("contour plan: delta=%g h=%.6g N=%d m=%d", result.delta, result.h,
                result.n_half, result.m)
    return result
