import numpy as np
import pytest

from eqm_decoder.core import ActionChunk
from eqm_decoder.errors import ConfigurationError, InvalidArgumentError, SolverDivergenceError
from eqm_decoder.field import AnalyticField, AnalyticKind, init_params
from eqm_decoder.solver import (
    CountingEvaluator,
    SolverConfig,
    StopReason,
    WarmStartMode,
    WarmStartState,
    analytic_evaluator,
    cold_start_init,
    euler_flow_sample,
    nesterov_step,
    network_evaluator,
    solve_equilibrium,
    time_network_evaluator,
    warm_start_init,
)


def _scalar(value: float) -> ActionChunk:
    return ActionChunk(np.array([[value]]))


def test_step_without_momentum_is_a_gradient_step(scalar_linear_field):
    evaluator = analytic_evaluator(scalar_linear_field)
    cfg = SolverConfig(step_size=1.0, momentum=0.0)
    nxt, residual = nesterov_step(_scalar(2.0), _scalar(2.0), cfg, evaluator)
    assert nxt.values[0, 0] == 0.0
    assert residual == pytest.approx(2.0)


def test_step_uses_the_lookahead_point(scalar_linear_field):
    evaluator = CountingEvaluator(analytic_evaluator(scalar_linear_field))
    cfg = SolverConfig(step_size=0.5, momentum=0.5)
    # lookahead = 1 + 0.5 (1 - 0) = 1.5, next = 1.5 - 0.5 * 1.5
    nxt, residual = nesterov_step(_scalar(1.0), _scalar(0.0), cfg, evaluator)
    assert nxt.values[0, 0] == pytest.approx(0.75)
    assert residual == pytest.approx(1.5)
    assert evaluator.calls == 1


def test_solve_linear_contraction_stops_at_threshold(scalar_linear_field):
    cfg = SolverConfig(step_size=0.5, momentum=0.0, threshold=0.1, max_iterations=100)
    chunk, trace = solve_equilibrium(analytic_evaluator(scalar_linear_field), None, _scalar(1.0), cfg)
    assert trace.iterations == 4
    assert trace.stop_reason is StopReason.THRESHOLD
    np.testing.assert_allclose(trace.residuals, [1.0, 0.5, 0.25, 0.125, 0.0625])
    assert chunk.values[0, 0] == pytest.approx(0.0625)


def test_solve_runs_to_the_cap_with_zero_threshold(scalar_linear_field):
    cfg = SolverConfig(step_size=0.5, momentum=0.0, threshold=0.0, max_iterations=5)
    _, trace = solve_equilibrium(analytic_evaluator(scalar_linear_field), None, _scalar(1.0), cfg)
    assert trace.stop_reason is StopReason.CAP
    assert trace.iterations == 5
    assert trace.residuals.size == 6
    assert trace.evaluations == 6


def test_solve_at_equilibrium_returns_init_after_one_evaluation(scalar_linear_field):
    evaluator = CountingEvaluator(analytic_evaluator(scalar_linear_field))
    init = _scalar(0.0)
    chunk, trace = solve_equilibrium(evaluator, None, init, SolverConfig(threshold=0.0))
    assert trace.iterations == 0
    assert trace.stop_reason is StopReason.THRESHOLD
    assert evaluator.calls == 1
    np.testing.assert_array_equal(chunk.values, init.values)


@pytest.mark.parametrize("threshold", [1e-1, 1e-3, 1e-6])
def test_evaluations_equal_iterations_plus_one(random_params, reach_condition, threshold):
    evaluator = CountingEvaluator(network_evaluator(random_params))
    init = cold_start_init(8, 2, np.random.default_rng(0))
    cfg = SolverConfig(step_size=0.1, momentum=0.9, threshold=threshold, max_iterations=40)
    _, trace = solve_equilibrium(evaluator, reach_condition, init, cfg)
    assert evaluator.calls == trace.iterations + 1 == trace.evaluations
    assert trace.iterations <= 40


def _anisotropic_field() -> AnalyticField:
    rng = np.random.default_rng(3)
    return AnalyticField(
        AnalyticKind.QUADRATIC_ENERGY_GRADIENT,
        ActionChunk(rng.standard_normal((4, 2))),
        stiffness=2.0,
        scales=rng.uniform(0.2, 1.0, size=(4, 2)),
    )


def test_stopping_index_matches_fresh_solves_and_is_monotone():
    field = _anisotropic_field()
    evaluator = analytic_evaluator(field)
    init = ActionChunk(np.random.default_rng(4).standard_normal((4, 2)) * 2.0)
    base = SolverConfig(step_size=0.1, momentum=0.9, threshold=1e-6, max_iterations=500)
    _, trace = solve_equilibrium(evaluator, None, init, base)

    grid = [1e-6, 1e-4, 1e-2, 1e-1, 1.0]
    counts = []
    for tau in grid:
        _, fresh = solve_equilibrium(evaluator, None, init, SolverConfig(0.1, 0.9, tau, 500))
        assert trace.stopping_index(tau) == fresh.iterations
        counts.append(fresh.iterations)
    assert all(b <= a for a, b in zip(counts, counts[1:]))


def test_stopping_index_rejects_tighter_threshold(scalar_linear_field):
    cfg = SolverConfig(step_size=0.5, momentum=0.0, threshold=0.1)
    _, trace = solve_equilibrium(analytic_evaluator(scalar_linear_field), None, _scalar(1.0), cfg)
    with pytest.raises(InvalidArgumentError):
        trace.stopping_index(0.01)


def test_recorded_lookaheads_end_with_the_returned_chunk(random_params, reach_condition):
    cfg = SolverConfig(threshold=1e-2, max_iterations=30, record_iterates=True)
    init = cold_start_init(8, 2, np.random.default_rng(1))
    chunk, trace = solve_equilibrium(network_evaluator(random_params), reach_condition, init, cfg)
    assert len(trace.iterates) == len(trace.lookaheads) == trace.iterations + 1
    np.testing.assert_array_equal(trace.lookahead_at(trace.iterations).values, chunk.values)
    np.testing.assert_array_equal(trace.iterates[0].values, init.values)


def test_trace_frame_columns(scalar_linear_field):
    _, trace = solve_equilibrium(analytic_evaluator(scalar_linear_field), None, _scalar(1.0),
                                 SolverConfig(step_size=0.5, momentum=0.0, threshold=0.1))
    frame = trace.to_frame()
    assert list(frame.columns) == ["k", "residual"]
    assert len(frame) == trace.iterations + 1


def test_divergence_is_raised(scalar_linear_field):
    cfg = SolverConfig(step_size=3.0, momentum=0.0, threshold=0.0, max_iterations=5000)
    with np.errstate(over="ignore", invalid="ignore"):
        with pytest.raises(SolverDivergenceError) as excinfo:
            solve_equilibrium(analytic_evaluator(scalar_linear_field), None, _scalar(1.0), cfg)
    assert excinfo.value.iteration > 0


def test_solver_config_validation():
    with pytest.raises(ConfigurationError):
        SolverConfig(step_size=0.0)
    with pytest.raises(ConfigurationError):
        SolverConfig(momentum=1.0)
    with pytest.raises(ConfigurationError):
        SolverConfig(threshold=-1.0)
    with pytest.raises(ConfigurationError):
        SolverConfig(max_iterations=0)
    assert SolverConfig.from_settings(threshold=0.5).threshold == 0.5


def test_network_evaluator_needs_a_condition(random_params):
    with pytest.raises(InvalidArgumentError):
        network_evaluator(random_params)(ActionChunk(np.zeros((8, 2))), None)


def test_cold_start_is_seeded_standard_normal():
    a = cold_start_init(8, 2, np.random.default_rng(5))
    b = cold_start_init(8, 2, np.random.default_rng(5))
    np.testing.assert_array_equal(a.values, b.values)
    draws = cold_start_init(1000, 1000, np.random.default_rng(6)).values
    assert abs(draws.mean()) < 0.01
    assert abs(draws.var() - 1.0) < 0.01


def test_shifted_warm_start_copies_rows_after_the_executed_step():
    previous = ActionChunk(np.arange(8.0).reshape(4, 2))
    init = warm_start_init(WarmStartState(previous, executed=1), np.random.default_rng(2))
    noise = np.random.default_rng(2).standard_normal((2, 2))
    np.testing.assert_array_equal(init.values[:2], previous.values[1:3])
    np.testing.assert_array_equal(init.values[2:], noise)


def test_leading_warm_start_copies_the_first_half():
    previous = ActionChunk(np.arange(8.0).reshape(4, 2))
    init = warm_start_init(WarmStartState(previous, executed=1), np.random.default_rng(2), WarmStartMode.LEADING)
    np.testing.assert_array_equal(init.values[:2], previous.values[:2])


def test_warm_start_errors():
    with pytest.raises(ConfigurationError):
        warm_start_init(WarmStartState(ActionChunk(np.zeros((3, 2)))), np.random.default_rng(0))
    with pytest.raises(ConfigurationError):
        warm_start_init(WarmStartState(ActionChunk(np.zeros((4, 2))), executed=3), np.random.default_rng(0))
    with pytest.raises(ConfigurationError):
        WarmStartState(ActionChunk(np.zeros((4, 2))), executed=0)


def test_euler_with_constant_field_adds_the_velocity():
    velocity = np.array([[1.0, -2.0], [0.5, 0.0]])
    evaluator = CountingEvaluator(lambda chunk, cond, time: velocity)
    sample = euler_flow_sample(evaluator, None, 8, np.random.default_rng(3), 2, 2)
    noise = np.random.default_rng(3).standard_normal((2, 2))
    np.testing.assert_allclose(sample.values, noise + velocity)
    assert evaluator.calls == 8


def test_euler_single_step_evaluates_at_time_zero():
    times = []

    def evaluator(chunk, cond, time):
        times.append(time)
        return -chunk.values

    sample = euler_flow_sample(evaluator, None, 1, np.random.default_rng(0), 2, 1)
    np.testing.assert_array_equal(sample.values, np.zeros((2, 1)))
    assert times == [0.0]


@pytest.mark.parametrize("steps", [16, 256])
def test_euler_reaches_the_single_data_point(steps):
    target = np.array([[0.3, -0.7], [1.2, 0.4]])

    def velocity(chunk, cond, time):
        return (target - chunk.values) / (1.0 - time)

    sample = euler_flow_sample(velocity, None, steps, np.random.default_rng(1), 2, 2)
    np.testing.assert_allclose(sample.values, target, atol=1e-9)


def test_euler_rejects_zero_steps():
    with pytest.raises(InvalidArgumentError):
        euler_flow_sample(lambda c, x, t: c.values, None, 0, np.random.default_rng(0), 2, 2)


def test_time_network_evaluator_counts_one_call_per_step(reach_condition):
    from eqm_decoder.field import FieldConfig

    params = init_params(FieldConfig(8, 2, 5, hidden_widths=(4,), time_conditioned=True), 0)
    evaluator = CountingEvaluator(time_network_evaluator(params))
    sample = euler_flow_sample(evaluator, reach_condition, 5, np.random.default_rng(0), 8, 2)
    assert evaluator.calls == 5
    assert sample.shape == (8, 2)
