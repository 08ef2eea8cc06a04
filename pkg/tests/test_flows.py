import math

import numpy as np
import pytest

from utils.errors import DomainError
from utils.flows import (
    FLOWS,
    OBSERVABLES,
    exact_pullback,
    flow_example1,
    flow_example2,
    flow_example3,
    flow_example4,
    ode_oracle,
    velocity_example2,
)


def test_contraction_halves_at_log_two():
    assert flow_example1(0.8, math.log(2)) == pytest.approx(0.4, rel=1e-15)


def test_bistable_fixed_points():
    for x in [-0.5, 0.0, 0.5]:
        assert flow_example2(x, 3.0) == pytest.approx(x, abs=1e-15)


def test_bistable_flow_approaches_attractors():
    assert flow_example2(0.9, 10.0) == pytest.approx(0.5, rel=1e-12)
    assert flow_example2(-0.1, 10.0) == pytest.approx(-0.5, rel=1e-12)


@pytest.mark.parametrize("x0", [-1.0, -0.3, 0.05, 0.7, 1.0])
@pytest.mark.parametrize("t", [0.1, 0.5, 2.0])
def test_bistable_flow_matches_oracle(x0, t):
    oracle = ode_oracle(velocity_example2, x0, t)
    assert flow_example2(x0, t) == pytest.approx(oracle[0], abs=1e-10)


@pytest.mark.parametrize("example", [1, 2, 3, 4])
def test_flows_agree_with_oracle(example):
    flow = FLOWS[example]
    x0 = np.array([0.6]) if flow.dim == 1 else np.array([0.6, -0.4])
    oracle = ode_oracle(flow.velocity_vector, x0, 1.3)
    computed = np.atleast_1d(flow(x0[0] if flow.dim == 1 else x0, 1.3))
    np.testing.assert_allclose(computed.ravel(), oracle, atol=1e-10)


@pytest.mark.parametrize("example", [1, 2, 3, 4])
def test_semigroup_property(example):
    flow = FLOWS[example]
    x = np.linspace(-0.9, 0.9, 7) if flow.dim == 1 else np.array([[0.3, -0.8], [0.1, 0.5]])
    np.testing.assert_allclose(flow(flow(x, 0.4), 0.7), flow(x, 1.1), atol=1e-13)


def test_rotation_periods():
    x = np.array([0.3, -1.2])
    np.testing.assert_allclose(flow_example3(x, 2 * math.pi), x, atol=1e-14)
    np.testing.assert_allclose(flow_example3(x, math.pi / 2), [-1.2, -0.3], atol=1e-14)


def test_tensor_flow_is_componentwise():
    x = np.array([[0.2, -0.7], [0.9, 0.1]])
    result = flow_example4(x, 0.6)
    np.testing.assert_array_equal(result[0], flow_example2(x[0], 0.6))
    np.testing.assert_array_equal(result[1], flow_example2(x[1], 0.6))


def test_pullback_at_time_zero_is_the_observable():
    x = np.linspace(-1, 1, 9)
    np.testing.assert_allclose(exact_pullback(FLOWS[1], OBSERVABLES[1], x, 0.0),
                               OBSERVABLES[1](x), atol=0)
    grid = np.array([x, x[::-1]])
    np.testing.assert_allclose(exact_pullback(FLOWS[3], OBSERVABLES[3], grid, 0.0),
                               OBSERVABLES[3](grid[0], grid[1]), atol=1e-15)


def test_pullback_leaving_domain_rejected():
    grid = np.array([[2.5], [0.0]])
    with pytest.raises(DomainError):
        exact_pullback(FLOWS[3], OBSERVABLES[3], grid, math.pi, half_width=1.0)


def test_negative_time_rejected():
    with pytest.raises(DomainError):
        FLOWS[1](0.5, -1.0)


@pytest.mark.parametrize("tol", [1e-16, 1e-3])
def test_oracle_tolerance_range(tol):
    with pytest.raises(DomainError):
        ode_oracle(velocity_example2, 0.3, 1.0, tol=tol)


def test_oracle_at_time_zero():
    np.testing.assert_array_equal(ode_oracle(velocity_example2, [0.3], 0.0), [0.3])


def test_oracle_on_linear_decay():
    assert ode_oracle(lambda y: -y, [1.0], 1.0)[0] == pytest.approx(math.exp(-1), abs=1e-12)
