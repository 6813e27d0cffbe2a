import numpy as np
import pytest

from conftest import numeric_gradient, relative_error
from eqm_decoder.envs import EnvSpec, episode_ids, generate_dataset
from eqm_decoder.errors import ConfigurationError, InvalidArgumentError, TrainingDivergenceError
from eqm_decoder.field import FieldConfig, FieldParams, init_params
from eqm_decoder.training import (
    SGD,
    Adam,
    Dataset,
    DemoBatch,
    EquilibriumDiagnostics,
    NormalizationStats,
    ScheduleKind,
    ScheduleSpec,
    TrainConfig,
    eqm_loss,
    equilibrium_diagnostics,
    flow_loss,
    holdout_split,
    make_optimizer,
    schedule_weights,
    train,
    weight_schedule,
)

LINEAR = ScheduleSpec(ScheduleKind.LINEAR)
TRUNCATED = ScheduleSpec(ScheduleKind.TRUNCATED_LINEAR, slope=4.0)


@pytest.fixture(scope="module")
def reach_dataset() -> Dataset:
    return generate_dataset(EnvSpec(), 20, np.random.default_rng(3))


def _demo_batch(size: int = 4, seed: int = 0) -> DemoBatch:
    rng = np.random.default_rng(seed)
    return DemoBatch(conds=rng.standard_normal((size, 5)), chunks=rng.standard_normal((size, 8, 2)))


def _field(time_conditioned: bool = False, zero_output_layer: bool = True) -> FieldParams:
    cfg = FieldConfig(horizon=8, action_dim=2, cond_width=5, hidden_widths=(6,), time_conditioned=time_conditioned)
    return init_params(cfg, 0, zero_output_layer=zero_output_layer)


@pytest.mark.parametrize(
    "spec,gamma,expected",
    [
        (LINEAR, 0.0, 1.0),
        (LINEAR, 0.25, 0.75),
        (LINEAR, 1.0, 0.0),
        (TRUNCATED, 0.0, 1.0),
        (TRUNCATED, 0.5, 1.0),
        (TRUNCATED, 0.9, 0.4),
        (TRUNCATED, 1.0, 0.0),
    ],
)
def test_weight_schedule_values(spec, gamma, expected):
    assert weight_schedule(gamma, spec) == pytest.approx(expected)


@pytest.mark.parametrize("spec", [LINEAR, TRUNCATED, ScheduleSpec(ScheduleKind.TRUNCATED_LINEAR, slope=1.5)])
def test_weight_schedule_is_non_increasing_and_non_negative(spec):
    weights = schedule_weights(np.linspace(0.0, 1.0, 101), spec)
    assert np.all(weights >= 0.0)
    assert np.all(np.diff(weights) <= 0.0)
    assert weights[-1] == 0.0


def test_weight_schedule_rejects_gamma_outside_unit_interval():
    with pytest.raises(InvalidArgumentError):
        weight_schedule(1.01, LINEAR)


def test_schedule_spec_validation():
    with pytest.raises(ConfigurationError):
        ScheduleSpec("cosine")
    with pytest.raises(ConfigurationError):
        ScheduleSpec(ScheduleKind.TRUNCATED_LINEAR, slope=0.0)


def test_eqm_loss_vanishes_at_gamma_one_for_zero_field():
    loss, grad = eqm_loss(_field(), _demo_batch(), LINEAR, np.random.default_rng(1), gamma=1.0)
    assert loss == 0.0
    assert not np.any(grad.to_vector())


def test_eqm_loss_at_gamma_zero_is_noise_to_data_distance():
    batch = _demo_batch()
    loss, _ = eqm_loss(_field(), batch, LINEAR, np.random.default_rng(2), gamma=0.0)
    noise = np.random.default_rng(2).standard_normal(batch.chunks.shape)
    expected = np.mean(np.sum((noise - batch.chunks) ** 2, axis=(1, 2)))
    assert loss == pytest.approx(expected)


def _gradient_case(case: int, time_conditioned: bool):
    rng = np.random.default_rng(2000 + case)
    cfg = FieldConfig(
        horizon=int(rng.integers(1, 4)),
        action_dim=int(rng.integers(1, 3)),
        cond_width=int(rng.integers(0, 4)),
        hidden_widths=tuple(int(w) for w in rng.integers(2, 6, size=int(rng.integers(1, 3)))),
        activation="linear" if case % 5 == 0 else "tanh",
        time_conditioned=time_conditioned,
    )
    size = int(rng.integers(1, 5))
    batch = DemoBatch(
        conds=rng.standard_normal((size, cfg.cond_width)),
        chunks=rng.standard_normal((size, cfg.horizon, cfg.action_dim)),
    )
    return init_params(cfg, case, zero_output_layer=False), batch


@pytest.mark.parametrize("case", range(20))
def test_eqm_loss_gradient_matches_finite_differences(case):
    params, batch = _gradient_case(case, time_conditioned=False)
    spec = TRUNCATED if case % 2 else LINEAR
    _, grad = eqm_loss(params, batch, spec, np.random.default_rng(case))

    def loss_at(vector: np.ndarray) -> float:
        return eqm_loss(FieldParams.from_vector(params.config, vector), batch, spec,
                        np.random.default_rng(case))[0]

    numeric = numeric_gradient(loss_at, params.to_vector())
    assert relative_error(grad.to_vector(), numeric) <= 1e-6


@pytest.mark.parametrize("case", range(20))
def test_flow_loss_gradient_matches_finite_differences(case):
    params, batch = _gradient_case(case, time_conditioned=True)
    _, grad = flow_loss(params, batch, np.random.default_rng(case))

    def loss_at(vector: np.ndarray) -> float:
        return flow_loss(FieldParams.from_vector(params.config, vector), batch, np.random.default_rng(case))[0]

    numeric = numeric_gradient(loss_at, params.to_vector())
    assert relative_error(grad.to_vector(), numeric) <= 1e-6


@pytest.mark.parametrize("objective", ["eqm", "flow"])
def test_losses_are_deterministic_for_a_fixed_generator_seed(objective):
    batch = _demo_batch(seed=8)
    if objective == "eqm":
        params = _field(zero_output_layer=False)
        first = eqm_loss(params, batch, TRUNCATED, np.random.default_rng(11))
        second = eqm_loss(params, batch, TRUNCATED, np.random.default_rng(11))
    else:
        params = _field(time_conditioned=True, zero_output_layer=False)
        first = flow_loss(params, batch, np.random.default_rng(11))
        second = flow_loss(params, batch, np.random.default_rng(11))
    assert first[0] == second[0]
    np.testing.assert_array_equal(first[1].to_vector(), second[1].to_vector())


def test_objectives_check_time_conditioning():
    with pytest.raises(ConfigurationError):
        eqm_loss(_field(time_conditioned=True), _demo_batch(), LINEAR, np.random.default_rng(0))
    with pytest.raises(ConfigurationError):
        flow_loss(_field(), _demo_batch(), np.random.default_rng(0))


def test_flow_loss_of_zero_field_is_velocity_norm():
    batch = _demo_batch(seed=6)
    loss, _ = flow_loss(_field(time_conditioned=True), batch, np.random.default_rng(3))
    noise = np.random.default_rng(3).standard_normal(batch.chunks.shape)
    expected = np.mean(np.sum((batch.chunks - noise) ** 2, axis=(1, 2)))
    assert loss == pytest.approx(expected)


def test_normalization_round_trip():
    raw = np.random.default_rng(0).normal(loc=[1.0, -2.0], scale=[0.5, 3.0], size=(50, 8, 2))
    stats = NormalizationStats.fit(raw)
    normalized = stats.normalize(raw)
    np.testing.assert_allclose(normalized.reshape(-1, 2).mean(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(normalized.reshape(-1, 2).std(axis=0), 1.0)
    np.testing.assert_allclose(stats.denormalize(normalized), raw)


def test_normalization_floors_constant_dimensions():
    stats = NormalizationStats.fit(np.ones((4, 2, 1)))
    assert stats.scale[0] == pytest.approx(1e-6)


def test_dataset_validation(reach_dataset):
    with pytest.raises(InvalidArgumentError):
        Dataset(conds=np.zeros((0, 5)), chunks=np.zeros((0, 8, 2)), stats=NormalizationStats.identity(2))
    with pytest.raises(InvalidArgumentError):
        Dataset(conds=reach_dataset.conds[:-1], chunks=reach_dataset.chunks, stats=reach_dataset.stats)
    batch = reach_dataset.batch(np.array([0, 0, 2]))
    assert batch.size == 3
    np.testing.assert_array_equal(batch.chunks[1], reach_dataset.chunks[0])


def test_sgd_and_adam_first_step():
    params = np.array([1.0, -1.0])
    grad = np.array([0.5, -2.0])
    np.testing.assert_allclose(SGD(0.1).step(params, grad), [0.95, -0.8])
    # bias-corrected first Adam step moves each coordinate by the learning rate
    np.testing.assert_allclose(Adam(0.01).step(params, grad), [0.99, -0.99], rtol=1e-6)
    with pytest.raises(ConfigurationError):
        make_optimizer("rmsprop", 0.1)


def test_train_config_validation():
    with pytest.raises(ConfigurationError):
        TrainConfig(steps=-1)
    with pytest.raises(ConfigurationError):
        TrainConfig(objective="diffusion")
    assert TrainConfig.from_settings(steps=5).steps == 5


def test_zero_steps_returns_initial_parameters(reach_dataset):
    initial = _field(zero_output_layer=False)
    params, losses = train(reach_dataset, TrainConfig(steps=0), initial)
    np.testing.assert_array_equal(params.to_vector(), initial.to_vector())
    assert losses.size == 0


def test_training_is_deterministic(reach_dataset):
    cfg = TrainConfig(steps=15, batch_size=8, seed=4)
    a, losses_a = train(reach_dataset, cfg, _field())
    b, losses_b = train(reach_dataset, cfg, _field())
    np.testing.assert_array_equal(losses_a, losses_b)
    np.testing.assert_array_equal(a.to_vector(), b.to_vector())


def test_training_reduces_the_loss(reach_dataset):
    cfg = FieldConfig(horizon=8, action_dim=2, cond_width=5, hidden_widths=(32, 32))
    _, losses = train(reach_dataset, TrainConfig(steps=400, batch_size=32, learning_rate=1e-3, seed=0),
                      init_params(cfg, 0))
    assert losses.size == 400
    assert losses[-50:].mean() < losses[:50].mean()


def test_training_checks_objective_against_field(reach_dataset):
    with pytest.raises(ConfigurationError):
        train(reach_dataset, TrainConfig(steps=1, objective="flow"), _field())
    with pytest.raises(ConfigurationError):
        train(reach_dataset, TrainConfig(steps=1), init_params(FieldConfig(8, 2, 4, hidden_widths=(4,)), 0))


def test_flow_training_runs(reach_dataset):
    params, losses = train(reach_dataset, TrainConfig(steps=10, batch_size=8, objective="flow"),
                           _field(time_conditioned=True))
    assert params.config.time_conditioned
    assert np.all(np.isfinite(losses))


def test_training_divergence_is_reported(reach_dataset):
    cfg = TrainConfig(steps=200, batch_size=16, learning_rate=1e10, optimizer="sgd")
    with np.errstate(over="ignore", invalid="ignore"):
        with pytest.raises(TrainingDivergenceError) as excinfo:
            train(reach_dataset, cfg, _field(zero_output_layer=False))
    assert excinfo.value.step >= 0


def test_equilibrium_diagnostics_of_zero_field(reach_dataset):
    diagnostics = equilibrium_diagnostics(_field(), reach_dataset)
    assert diagnostics.mean_residual == 0.0
    assert set(diagnostics.to_dict()) == {"mean_residual", "median_ratio", "records"}
    assert diagnostics.records == reach_dataset.size
    assert diagnostics.failed_checks() == []


@pytest.mark.parametrize(
    "mean_residual,median_ratio,expected",
    [
        (0.01, 0.2, []),
        (0.05, 0.2, ["mean_residual"]),
        (0.01, 0.5, ["median_ratio"]),
        (0.3, 0.9, ["mean_residual", "median_ratio"]),
        (float("nan"), 0.2, ["mean_residual"]),
    ],
)
def test_equilibrium_thresholds(mean_residual, median_ratio, expected):
    diagnostics = EquilibriumDiagnostics(mean_residual=mean_residual, median_ratio=median_ratio)
    assert diagnostics.failed_checks() == expected


def test_equilibrium_thresholds_can_be_loosened():
    diagnostics = EquilibriumDiagnostics(mean_residual=0.1, median_ratio=0.6)
    assert diagnostics.failed_checks(max_mean_residual=0.2, max_median_ratio=0.7) == []


def test_holdout_split_keeps_whole_episodes(reach_dataset):
    labels = episode_ids(reach_dataset)
    train_set, held = holdout_split(reach_dataset, labels, 0.25, seed=1)
    assert held is not None
    assert np.unique(episode_ids(held)).size == 5
    assert train_set.size + held.size == reach_dataset.size
    held_rows = {tuple(row) for row in held.conds}
    train_rows = {tuple(row) for row in train_set.conds}
    assert not held_rows & train_rows
    assert held.stats is reach_dataset.stats
    again, _ = holdout_split(reach_dataset, labels, 0.25, seed=1)
    np.testing.assert_array_equal(again.conds, train_set.conds)


def test_holdout_split_leaves_one_training_episode(reach_dataset):
    labels = np.zeros(reach_dataset.size, dtype=int)
    labels[-1] = 1
    train_set, held = holdout_split(reach_dataset, labels, 0.9, seed=0)
    assert held is not None
    assert {held.size, train_set.size} == {1, reach_dataset.size - 1}
    whole, nothing = holdout_split(reach_dataset, labels, 0.0, seed=0)
    assert whole is reach_dataset and nothing is None


def test_holdout_split_validation(reach_dataset):
    with pytest.raises(InvalidArgumentError):
        holdout_split(reach_dataset, np.zeros(3), 0.1, seed=0)
    with pytest.raises(InvalidArgumentError):
        holdout_split(reach_dataset, np.zeros(reach_dataset.size), 1.0, seed=0)
