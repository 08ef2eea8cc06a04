"""
Shared fixtures for the test suite.
"""

import numpy as np
import pytest

from utils.bounds import SemigroupConstants
from utils.discretize import DiscreteField, build_koopman_1d
from utils.flows import observable_example1, velocity_example1
from utils.operators import GeneratorBackend


@pytest.fixture
def unit_constants():
    return SemigroupConstants()


@pytest.fixture(scope="session")
def example1_backend():
    """Chebyshev backend of A g = -x g' with 65 points"""
    field = DiscreteField(dim=1, velocity=velocity_example1, resolution=64, name="example1")
    return build_koopman_1d(field)


@pytest.fixture(scope="session")
def example1_observable(example1_backend):
    return observable_example1(example1_backend.nodes)


@pytest.fixture
def scalar_backend():
    """1x1 generator A = [-1]"""
    return GeneratorBackend(np.array([[-1.0]]), label="scalar")


class CountingBackend(GeneratorBackend):
    """Backend recording how many shifted systems it factors"""

    def __init__(self, matrix, **kwargs):
        super().__init__(matrix, **kwargs)
        self.factorizations = 0

    def shifted_solver(self, z):
        self.factorizations += 1
        return super().shifted_solver(z)


@pytest.fixture
def counting_backend():
    rng = np.random.default_rng(7)
    # dissipative: symmetric negative definite part keeps the spectrum in Re z < 0
    q = rng.standard_normal((6, 6))
    matrix = -(q @ q.T) / 6 - np.eye(6) + (q - q.T) / 4
    return CountingBackend(matrix, label="counting")
