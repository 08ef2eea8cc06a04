import math

import numpy as np
import pytest

from config import PLAN_SWEEP_MAX_NODES
from utils.bounds import SemigroupConstants, disc_bound_m, total_budget, trunc_bound_asymptotic
from utils.errors import DomainError, PlanInfeasibleError
from utils.params import (
    ContourPlan,
    nodes_for_tolerance,
    optimize_spacing,
    plan,
    spacing_for_tolerance,
)

C = SemigroupConstants()


def test_plan_properties():
    p = ContourPlan(delta=2.0, h=0.5, n_half=3, m=4, t_max=1.0)
    assert p.node_count == 7
    assert p.shift == 4.0
    assert p.denominator_offset == 2.0
    second = ContourPlan(delta=2.0, h=0.5, n_half=3, m=2, t_max=1.0, pole_offset=1.0)
    assert second.shift == 3.0
    assert second.denominator_offset == 1.0


@pytest.mark.parametrize("kwargs", [
    dict(delta=0.0, h=0.5, n_half=3, m=2, t_max=1.0),
    dict(delta=2.0, h=-0.5, n_half=3, m=2, t_max=1.0),
    dict(delta=2.0, h=0.5, n_half=0, m=2, t_max=1.0),
    dict(delta=2.0, h=0.5, n_half=3, m=5, t_max=1.0),
    dict(delta=2.0, h=0.5, n_half=3, m=4, t_max=1.0, pole_offset=1.0),
    dict(delta=2.0, h=0.5, n_half=3, m=2, t_max=1.0, pole_offset=-1.0),
])
def test_invalid_plans_rejected(kwargs):
    with pytest.raises(DomainError):
        ContourPlan(**kwargs)


@pytest.mark.parametrize("m", [2, 4, 6, 8])
@pytest.mark.parametrize("eps", [1e-2, 1e-6, 1e-10])
def test_spacing_puts_half_the_tolerance_in_discretization(m, eps):
    norm = 2.0 ** (m - 2)
    h = spacing_for_tolerance(eps, 2.0, m, 1.0, C, norm)
    assert disc_bound_m(C, 2.0, m, 1.0, h, norm) == pytest.approx(eps / 2, rel=1e-10)


@pytest.mark.parametrize("m", [2, 4, 6, 8])
def test_nodes_meet_asymptotic_truncation_target(m):
    eps, norm = 1e-6, 2.0 ** (m - 2)
    h = spacing_for_tolerance(eps, 2.0, m, 1.0, C, norm)
    n_half = nodes_for_tolerance(eps, 2.0, m, 1.0, C, norm, h)
    assert trunc_bound_asymptotic(C, 2.0, m, 1.0, h, n_half, norm) <= eps / 2 * (1 + 1e-12)
    if n_half > 1:
        assert trunc_bound_asymptotic(C, 2.0, m, 1.0, h, n_half - 1, norm) > eps / 2


def test_spacing_decreases_with_tolerance():
    spacings = [spacing_for_tolerance(eps, 2.0, 4, 1.0, C, 1.0) for eps in [1e-2, 1e-4, 1e-8]]
    assert spacings[0] > spacings[1] > spacings[2]


def test_zero_norm_plans_are_trivial():
    assert nodes_for_tolerance(1e-6, 2.0, 4, 1.0, C, 0.0, 0.5) == 1
    assert spacing_for_tolerance(1e-6, 2.0, 4, 1.0, C, 0.0) > 0


def test_negative_graph_norm_rejected():
    with pytest.raises(DomainError):
        spacing_for_tolerance(1e-6, 2.0, 4, 1.0, C, -1.0)
    with pytest.raises(DomainError):
        nodes_for_tolerance(1e-6, 2.0, 4, 1.0, C, -1.0, 0.5)


def test_node_cap_raises():
    with pytest.raises(PlanInfeasibleError):
        plan(1e-14, 2.0, 2, 1.0, C, 1.0, max_nodes=1000)


def test_invalid_tolerance():
    with pytest.raises(DomainError):
        spacing_for_tolerance(0.0, 2.0, 4, 1.0, C, 1.0)
    with pytest.raises(DomainError):
        plan(-1e-3, 2.0, 4, 1.0, C, 1.0)


@pytest.mark.parametrize("m", [2, 4, 6, 8])
@pytest.mark.parametrize("eps", [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8])
def test_planned_budget_meets_tolerance(m, eps):
    norm = 2.0 ** (m - 2)
    result = plan(eps, 2.0, m, 1.0, C, norm, max_nodes=PLAN_SWEEP_MAX_NODES)
    budget = result.budget(C, norm)
    assert budget.e_disc <= eps / 2 * (1 + 1e-10)
    assert budget.e_trunc <= eps / 2 * (1 + 1e-10)
    assert budget.total <= eps * (1 + 1e-10)


@pytest.mark.parametrize("m", [2, 4, 6, 8])
@pytest.mark.parametrize("eps", [1e-2, 1e-4, 1e-6, 1e-8])
def test_planned_spacing_close_to_optimal(m, eps):
    norm = 2.0 ** (m - 2)
    result = plan(eps, 2.0, m, 1.0, C, norm, max_nodes=PLAN_SWEEP_MAX_NODES)
    if result.n_half < 10:
        pytest.skip("planner targets N >= 10")
    planned = result.budget(C, norm).total
    h_opt = optimize_spacing(result.n_half, 2.0, m, 1.0, C, norm)
    optimal = total_budget(C, 2.0, m, 1.0, h_opt, result.n_half, norm).total
    assert optimal <= planned * (1 + 1e-9)
    # the even split costs at most a factor of two over the optimum
    assert planned <= 2 * optimal


def test_optimized_spacing_beats_log_grid():
    n_half, norm = 50, 4.0
    h_opt = optimize_spacing(n_half, 2.0, 4, 1.0, C, norm)
    best = total_budget(C, 2.0, 4, 1.0, h_opt, n_half, norm).total
    for h in np.geomspace(1e-3, 10, 200):
        assert best <= total_budget(C, 2.0, 4, 1.0, h, n_half, norm).total * (1 + 1e-6)


def test_optimized_spacing_for_pole_offset_scheme():
    h = optimize_spacing(100, 3.0, 2, 1.0, C, 1.0, pole_offset=2.0)
    assert 0 < h < 30
    assert math.isfinite(total_budget(C, 3.0, 2, 1.0, h, 100, 1.0, pole_offset=2.0).total)


def test_optimized_envelope_decays_with_nodes():
    totals = []
    for n_half in [10, 20, 50, 100, 200, 400, 800]:
        h = optimize_spacing(n_half, 2.0, 2, 1.0, C, 1.0, pole_offset=2.0)
        totals.append(total_budget(C, 2.0, 2, 1.0, h, n_half, 1.0, pole_offset=2.0).total)
    assert all(a > b for a, b in zip(totals, totals[1:]))
    slope = np.polyfit(np.log([100, 200, 400, 800]), np.log(totals[3:]), 1)[0]
    assert -1.3 < slope < -0.7


def test_plan_composes_spacing_and_nodes():
    result = plan(1e-6, 2.0, 6, 1.0, C, 16.0)
    assert result.h == spacing_for_tolerance(1e-6, 2.0, 6, 1.0, C, 16.0)
    assert result.n_half >= nodes_for_tolerance(1e-6, 2.0, 6, 1.0, C, 16.0, result.h)
    assert plan(1e-6, 2.0, 6, 1.0, C, 16.0) == result


def test_node_count_nonincreasing_in_tolerance():
    counts = [plan(eps, 2.0, 4, 1.0, C, 4.0).n_half for eps in [1e-8, 1e-6, 1e-4, 1e-2]]
    assert counts == sorted(counts, reverse=True)


def test_node_count_power_law_in_graph_norm():
    h = 0.3
    single = nodes_for_tolerance(1e-6, 2.0, 2, 1.0, C, 1.0, h, max_nodes=PLAN_SWEEP_MAX_NODES)
    double = nodes_for_tolerance(1e-6, 2.0, 2, 1.0, C, 2.0, h, max_nodes=PLAN_SWEEP_MAX_NODES)
    assert double / single == pytest.approx(2.0, rel=1e-6)


def test_optimized_spacing_is_locally_optimal():
    h = optimize_spacing(40, 2.0, 6, 1.0, C, 16.0)
    at = total_budget(C, 2.0, 6, 1.0, h, 40, 16.0).total
    assert at <= total_budget(C, 2.0, 6, 1.0, 2 * h, 40, 16.0).total
    assert at <= total_budget(C, 2.0, 6, 1.0, h / 2, 40, 16.0).total
