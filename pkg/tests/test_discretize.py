import math

import numpy as np
import pytest
import scipy.sparse as sp

from utils.discretize import (
    DiscreteField,
    build_koopman_1d,
    build_koopman_2d,
    chebyshev_differentiation,
    chebyshev_points,
    finite_difference_matrix,
    grid_points,
)
from utils.errors import DomainError
from utils.flows import (
    observable_example1,
    observable_gaussian,
    velocity_example1,
    velocity_example2,
    velocity_example3,
    velocity_example4,
)


def test_chebyshev_points_are_symmetric_and_descending():
    x = chebyshev_points(8)
    assert x[0] == 1.0 and x[-1] == -1.0
    assert np.all(np.diff(x) < 0)
    np.testing.assert_array_equal(x, -x[::-1])


def test_differentiation_matrix_is_exact_on_polynomials():
    x, D = chebyshev_differentiation(10)
    np.testing.assert_allclose(D @ np.ones_like(x), 0.0, atol=1e-13)
    np.testing.assert_allclose(D @ x ** 4, 4 * x ** 3, atol=1e-12)


def test_zero_field_gives_zero_generator():
    field = DiscreteField(dim=1, velocity=lambda x: 0 * x, resolution=16)
    backend = build_koopman_1d(field)
    assert not np.any(backend.matrix)


def test_contraction_on_identity_observable():
    backend = build_koopman_1d(DiscreteField(dim=1, velocity=velocity_example1, resolution=16))
    x = backend.nodes
    np.testing.assert_allclose(backend.apply_A(x), -x, atol=1e-13)


def test_contraction_on_smooth_observable(example1_backend):
    x = example1_backend.nodes
    g = observable_example1(x)
    slope = np.pi * np.cos(np.pi * x) * (1 - x * x) - 2 * x * np.sin(np.pi * x)
    np.testing.assert_allclose(example1_backend.apply_A(g), -x * slope, atol=1e-10)


def test_scaled_domain():
    field = DiscreteField(dim=1, velocity=velocity_example1, resolution=20, half_width=3.0)
    backend = build_koopman_1d(field)
    x = backend.nodes
    assert x[0] == pytest.approx(3.0)
    np.testing.assert_allclose(backend.apply_A(x ** 2), -2 * x ** 2, atol=1e-11)


def test_outward_field_rejected():
    field = DiscreteField(dim=1, velocity=lambda x: x, resolution=16, name="expanding")
    with pytest.raises(DomainError, match="outward"):
        build_koopman_1d(field)


def test_bistable_field_is_inward():
    field = DiscreteField(dim=1, velocity=velocity_example2, resolution=16)
    assert field.inward_pointing() == {"left": True, "right": True}


@pytest.mark.parametrize("field", [
    DiscreteField(dim=1, velocity=velocity_example1, resolution=1),
    DiscreteField(dim=2, velocity=velocity_example3, resolution=2),
])
def test_coarse_resolution_rejected(field):
    build = build_koopman_1d if field.dim == 1 else build_koopman_2d
    with pytest.raises(DomainError):
        build(field)


def test_non_finite_velocity_rejected():
    field = DiscreteField(dim=1, velocity=lambda x: 1 / x, resolution=4)
    with pytest.raises(DomainError):
        field.velocity_values()


def test_invalid_field_dimensions():
    with pytest.raises(DomainError):
        DiscreteField(dim=3, velocity=velocity_example1, resolution=4)
    with pytest.raises(DomainError):
        DiscreteField(dim=1, velocity=velocity_example1, resolution=4, half_width=0.0)


def test_finite_difference_stencil_is_exact_on_quadratics():
    x = np.linspace(-1, 1, 7)
    D = finite_difference_matrix(7, x[1] - x[0])
    np.testing.assert_allclose(D @ (x ** 2 - x), 2 * x - 1, atol=1e-12)
    with pytest.raises(DomainError):
        finite_difference_matrix(2, 1.0)


def test_rotation_on_linear_observable():
    field = DiscreteField(dim=2, velocity=velocity_example3, resolution=11, half_width=3.0)
    backend = build_koopman_2d(field)
    x1, x2 = grid_points(field)
    np.testing.assert_allclose(backend.apply_A(x1), x2, atol=1e-12)
    np.testing.assert_allclose(backend.apply_A(x2), -x1, atol=1e-12)


def generator_orders(resolutions, inner=False):
    """Observed orders of A g between consecutive refinements"""
    errors, spacings = [], []
    for n in resolutions:
        field = DiscreteField(dim=2, velocity=velocity_example4, resolution=n)
        backend = build_koopman_2d(field)
        x1, x2 = grid_points(field)
        g = observable_gaussian(x1, x2)
        f1, f2 = velocity_example4(x1, x2)
        exact = f1 * (-4 * x1 * g) + f2 * (-x2 * g)
        error = np.abs(backend.apply_A(g) - exact)
        if inner:
            # fixed window of nodes shared by every grid, away from the one-sided rows
            error = error[(np.abs(x1) <= 0.5 + 1e-12) & (np.abs(x2) <= 0.5 + 1e-12)]
        errors.append(np.max(error))
        spacings.append(2 / (n - 1))
    return [math.log(errors[i] / errors[i + 1]) / math.log(spacings[i] / spacings[i + 1])
            for i in range(len(errors) - 1)]


def test_centered_stencil_is_second_order_inside():
    for order in generator_orders([41, 81, 161], inner=True):
        assert 1.9 <= order <= 2.1


def test_two_dimensional_generator_is_second_order():
    (order,) = generator_orders([161, 321])
    assert 1.8 <= order <= 2.2


def test_separable_field_is_a_kronecker_sum():
    n = 9
    field = DiscreteField(dim=2, velocity=velocity_example4, resolution=n)
    backend = build_koopman_2d(field)
    x = np.linspace(-1, 1, n)
    one_d = sp.diags(velocity_example2(x)) @ finite_difference_matrix(n, x[1] - x[0])
    expected = sp.kron(one_d, sp.identity(n)) + sp.kron(sp.identity(n), one_d)
    assert abs(backend.matrix - expected).max() <= 1e-12


def test_rectangular_grid_shape():
    field = DiscreteField(dim=2, velocity=velocity_example3, resolution=(5, 7))
    backend = build_koopman_2d(field)
    assert backend.dimension == 35
    assert backend.grid["shape"] == (5, 7)
    assert backend.is_sparse and backend.is_real
