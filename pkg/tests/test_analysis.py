import math

import numpy as np
import pytest

from eqm_decoder.analysis import (
    CheckStatus,
    check_descent,
    circle_loop,
    conservativity_probe,
    estimate_contraction,
    failed_checks,
    residual_decay_bound,
    results_frame,
    run_verification_suite,
    sufficient_iterations,
    sufficient_iterations_real,
    warm_start_saving,
)
from eqm_decoder.core import ActionChunk
from eqm_decoder.errors import ContractError, InsufficientDataError, InvalidArgumentError
from eqm_decoder.field import AnalyticField, AnalyticKind
from eqm_decoder.solver import SolverConfig, analytic_evaluator, solve_equilibrium


def _scalar(value: float) -> ActionChunk:
    return ActionChunk(np.array([[value]]))


def _solve_scalar(field, step_size, start=1.0, threshold=1e-12, max_iterations=30):
    cfg = SolverConfig(step_size=step_size, momentum=0.0, threshold=threshold,
                       max_iterations=max_iterations, record_iterates=True)
    return solve_equilibrium(analytic_evaluator(field), None, _scalar(start), cfg)[1]


def test_residual_decay_bound_value():
    assert residual_decay_bound(2.0, 0.5, 3.0, 2, 4, 1) == pytest.approx(2.0 / 2.0 * 0.25 * 3.0)
    with pytest.raises(InvalidArgumentError):
        residual_decay_bound(1.0, 0.5, 1.0, -1, 1, 1)


def test_sufficient_iterations_examples():
    assert sufficient_iterations(1.0, 1.0, 0.1, 1, 1, 0.5) == 4
    assert sufficient_iterations(1.0, 0.05, 0.1, 1, 1, 0.5) == 0


@pytest.mark.parametrize("rho", [0.0, 1.0, 1.5])
def test_sufficient_iterations_rejects_invalid_rate(rho):
    with pytest.raises(InvalidArgumentError):
        sufficient_iterations(1.0, 1.0, 0.1, 1, 1, rho)


def test_sufficient_iterations_rejects_zero_threshold():
    with pytest.raises(InvalidArgumentError):
        sufficient_iterations(1.0, 1.0, 0.0, 1, 1, 0.5)


def test_sufficient_iterations_monotonicity():
    taus = [1e-4, 1e-3, 1e-2, 1e-1]
    dists = [0.5, 1.0, 2.0, 4.0]
    by_tau = [sufficient_iterations(1.5, 2.0, tau, 4, 2, 0.7) for tau in taus]
    by_dist = [sufficient_iterations(1.5, d, 1e-3, 4, 2, 0.7) for d in dists]
    assert all(b <= a for a, b in zip(by_tau, by_tau[1:]))
    assert all(b >= a for a, b in zip(by_dist, by_dist[1:]))


def test_halving_the_initial_distance_saves_one_step_at_rate_one_half():
    full = sufficient_iterations_real(1.0, 1.0, 1e-3, 1, 1, 0.5)
    half = sufficient_iterations_real(1.0, 0.5, 1e-3, 1, 1, 0.5)
    assert full - half == pytest.approx(1.0)


def test_warm_start_saving():
    assert warm_start_saving(0.5, 0.5) == pytest.approx(1.0)
    assert warm_start_saving(0.25, 0.5) == pytest.approx(2.0)
    with pytest.raises(InvalidArgumentError):
        warm_start_saving(1.0, 0.5)


def test_descent_bound_is_tight_for_unit_quadratic():
    field = AnalyticField(AnalyticKind.QUADRATIC_ENERGY_GRADIENT, _scalar(0.0))
    report = check_descent(field, SolverConfig(step_size=1.0, momentum=0.0), _scalar(math.sqrt(2.0)), 1)
    assert report.energies[0] == pytest.approx(1.0)
    assert report.bounds[0] == pytest.approx(2.0)
    assert report.min_squared_residuals[0] == pytest.approx(2.0)
    assert not report.violated
    assert report.within_hypothesis


def test_descent_from_the_minimizer_has_zero_residuals():
    field = AnalyticField(AnalyticKind.QUADRATIC_ENERGY_GRADIENT, ActionChunk(np.ones((2, 2))))
    report = check_descent(field, SolverConfig(step_size=1.0, momentum=0.0), ActionChunk(np.ones((2, 2))), 5)
    assert not np.any(report.residuals)
    assert not report.violated


@pytest.mark.parametrize("seed", range(5))
def test_random_descent_is_monotone_and_bounded(seed):
    rng = np.random.default_rng(seed)
    field = AnalyticField(
        AnalyticKind.QUADRATIC_ENERGY_GRADIENT,
        ActionChunk(rng.standard_normal((4, 2))),
        stiffness=2.0,
        scales=rng.uniform(0.1, 1.0, size=(4, 2)),
    )
    cfg = SolverConfig(step_size=1.0 / field.lipschitz, momentum=0.0)
    report = check_descent(field, cfg, ActionChunk(3.0 * rng.standard_normal((4, 2))), 50)
    assert np.all(np.diff(report.energies) <= 1e-12)
    assert np.all(report.min_squared_residuals <= report.bounds + 1e-12)
    assert not report.violated
    assert list(report.to_frame().columns) == ["k", "energy", "residual", "bound"]


def test_descent_flags_steps_outside_the_hypothesis():
    field = AnalyticField(AnalyticKind.QUADRATIC_ENERGY_GRADIENT, ActionChunk(np.zeros((2, 2))))
    report = check_descent(field, SolverConfig(step_size=2.5, momentum=0.0), ActionChunk(np.ones((2, 2))), 5)
    assert not report.within_hypothesis
    assert report.violated


def test_descent_contract_errors():
    quadratic = AnalyticField(AnalyticKind.QUADRATIC_ENERGY_GRADIENT, _scalar(0.0))
    with pytest.raises(ContractError):
        check_descent(quadratic, SolverConfig(step_size=1.0, momentum=0.5), _scalar(1.0), 3)
    rotation = AnalyticField(AnalyticKind.ROTATION, ActionChunk(np.zeros((1, 2))), rotation=1.0)
    with pytest.raises(ContractError):
        check_descent(rotation, SolverConfig(step_size=0.1, momentum=0.0), ActionChunk(np.ones((1, 2))), 3)


@pytest.mark.parametrize("step_size,expected", [(0.5, 0.5), (1.5, 0.5), (0.25, 0.75)])
def test_contraction_rate_of_linear_field(scalar_linear_field, step_size, expected):
    trace = _solve_scalar(scalar_linear_field, step_size)
    report = estimate_contraction(trace, scalar_linear_field.equilibrium)
    assert report.rate == pytest.approx(expected, abs=1e-3)
    assert report.satisfied


def test_contraction_reports_zero_on_exact_convergence(scalar_linear_field):
    trace = _solve_scalar(scalar_linear_field, 1.0)
    report = estimate_contraction(trace, scalar_linear_field.equilibrium)
    assert report.rate == 0.0


def test_residual_bound_holds_along_the_trace(scalar_linear_field):
    trace = _solve_scalar(scalar_linear_field, 0.5)
    report = estimate_contraction(trace, scalar_linear_field.equilibrium, lipschitz=1.0, rho=0.5)
    assert np.all(report.residual_bound_holds)


def test_contraction_needs_three_iterates(scalar_linear_field):
    trace = _solve_scalar(scalar_linear_field, 0.5, threshold=0.0, max_iterations=1)
    with pytest.raises(InsufficientDataError):
        estimate_contraction(trace, scalar_linear_field.equilibrium)
    unrecorded = solve_equilibrium(analytic_evaluator(scalar_linear_field), None, _scalar(1.0),
                                   SolverConfig(step_size=0.5, momentum=0.0))[1]
    with pytest.raises(InsufficientDataError):
        estimate_contraction(unrecorded, scalar_linear_field.equilibrium)


def test_solver_stays_within_the_sufficient_iteration_count(scalar_linear_field):
    for tau in [0.3, 0.1, 1e-2, 1e-4]:
        predicted = sufficient_iterations(1.0, 1.0, tau, 1, 1, 0.5)
        trace = _solve_scalar(scalar_linear_field, 0.5, threshold=tau, max_iterations=100)
        assert trace.iterations <= predicted


@pytest.mark.parametrize("alpha", [0.5, 0.25, 0.1])
def test_warm_start_gap_matches_predicted_saving(scalar_linear_field, alpha):
    cold = _solve_scalar(scalar_linear_field, 0.5, start=1.0, threshold=1e-3, max_iterations=100)
    warm = _solve_scalar(scalar_linear_field, 0.5, start=alpha, threshold=1e-3, max_iterations=100)
    assert abs((cold.iterations - warm.iterations) - warm_start_saving(alpha, 0.5)) <= 1.0


def test_gradient_field_has_no_circulation():
    center = ActionChunk(np.array([[0.3, -0.2], [1.0, 0.5]]))
    field = AnalyticField(AnalyticKind.QUADRATIC_ENERGY_GRADIENT, center, stiffness=2.0)
    loop = circle_loop(center, 0.7, 90, plane=(1, 2))
    assert abs(conservativity_probe(analytic_evaluator(field), None, loop)) <= 1e-6


def test_rotation_field_circulation():
    center = ActionChunk(np.zeros((1, 2)))
    field = AnalyticField(AnalyticKind.ROTATION, center, stiffness=1.0, rotation=1.0)
    circulation = conservativity_probe(analytic_evaluator(field), None, circle_loop(center, 1.0, 360))
    assert circulation == pytest.approx(2.0 * math.pi, rel=0.01)


def test_circle_loop_arguments():
    center = ActionChunk(np.zeros((1, 2)))
    assert len(circle_loop(center, 1.0, 12)) == 12
    with pytest.raises(InvalidArgumentError):
        circle_loop(center, 1.0, 2)
    with pytest.raises(InvalidArgumentError):
        circle_loop(center, 1.0, 12, plane=(0, 0))


def test_verification_suite_passes():
    results, descent = run_verification_suite(seed=0)
    assert failed_checks(results) == []
    statuses = {r.name: r.status for r in results}
    assert statuses["descent_step_above_inverse_lipschitz"] is CheckStatus.INFO
    assert statuses["contraction_rate"] is CheckStatus.PASS
    assert statuses["loop_integral_rotation_field"] is CheckStatus.PASS
    frame = results_frame(results)
    assert list(frame.columns) == ["check", "status", "measured", "expected", "detail"]
    assert len(descent.residuals) == 50
