import numpy as np
import pytest

from eqm_decoder.core import (
    ActionChunk,
    Condition,
    chunk_flatten,
    chunk_unflatten,
    interpolate_batch,
    make_interpolant,
    normalized_residual,
)
from eqm_decoder.errors import InvalidArgumentError, NumericError


def test_action_chunk_rejects_non_finite_values():
    with pytest.raises(NumericError):
        ActionChunk(np.array([[0.0, np.nan]]))


def test_action_chunk_requires_matrix():
    with pytest.raises(InvalidArgumentError):
        ActionChunk(np.zeros(3))
    with pytest.raises(InvalidArgumentError):
        ActionChunk(np.zeros((0, 2)))


def test_action_chunk_is_read_only():
    chunk = ActionChunk(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        chunk.values[0, 0] = 1.0


def test_require_shape():
    chunk = ActionChunk(np.zeros((4, 2)))
    assert chunk.require_shape(4, 2) is chunk
    with pytest.raises(InvalidArgumentError):
        chunk.require_shape(2, 4)


def test_condition_from_vector_splits_state_and_goal():
    cond = Condition.from_vector([0.1, 0.2, 0.5, 0.9, 0.8], state_width=3)
    np.testing.assert_array_equal(cond.state, [0.1, 0.2, 0.5])
    np.testing.assert_array_equal(cond.goal, [0.9, 0.8])
    np.testing.assert_array_equal(cond.vector, [0.1, 0.2, 0.5, 0.9, 0.8])
    assert cond.width == 5


def test_condition_width_check():
    cond = Condition(state=np.zeros(3), goal=np.zeros(2))
    with pytest.raises(InvalidArgumentError):
        cond.require_width(4)
    with pytest.raises(InvalidArgumentError):
        Condition.from_vector([1.0, 2.0], state_width=3)


def test_interpolant_endpoints():
    data = ActionChunk(np.array([[1.0, 2.0], [3.0, 4.0]]))
    noise = ActionChunk(np.array([[-1.0, 0.0], [0.5, 0.5]]))
    np.testing.assert_array_equal(make_interpolant(data, noise, 0.0).a_gamma.values, noise.values)
    np.testing.assert_array_equal(make_interpolant(data, noise, 1.0).a_gamma.values, data.values)
    mid = make_interpolant(data, noise, 0.25)
    np.testing.assert_allclose(mid.a_gamma.values, 0.25 * data.values + 0.75 * noise.values)
    assert mid.gamma == 0.25


@pytest.mark.parametrize("gamma", [-0.1, 1.5])
def test_interpolant_rejects_gamma_outside_unit_interval(gamma):
    chunk = ActionChunk(np.zeros((2, 2)))
    with pytest.raises(InvalidArgumentError):
        make_interpolant(chunk, chunk, gamma)


def test_interpolant_rejects_shape_mismatch():
    with pytest.raises(InvalidArgumentError):
        make_interpolant(ActionChunk(np.zeros((2, 2))), ActionChunk(np.zeros((4, 1))), 0.5)


def test_normalized_residual():
    assert normalized_residual(np.ones((4, 2))) == pytest.approx(1.0)
    assert normalized_residual(np.zeros((3, 3))) == 0.0
    assert normalized_residual(np.array([[3.0, 4.0]])) == pytest.approx(5.0 / np.sqrt(2.0))


@pytest.mark.parametrize("gamma", [0.0, 0.1, 0.5, 0.9, 1.0])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_interpolant_is_affine_in_gamma(gamma, seed):
    rng = np.random.default_rng(seed)
    data = ActionChunk(rng.standard_normal((3, 2)))
    noise = ActionChunk(rng.standard_normal((3, 2)))
    result = make_interpolant(data, noise, gamma).a_gamma.values
    np.testing.assert_allclose(result, gamma * data.values + (1.0 - gamma) * noise.values, rtol=1e-12, atol=1e-12)


def test_interpolant_midpoint_example():
    result = make_interpolant(ActionChunk(np.array([[2.0, 0.0]])), ActionChunk(np.array([[0.0, 2.0]])), 0.5)
    np.testing.assert_array_equal(result.a_gamma.values, [[1.0, 1.0]])


def test_interpolate_batch_matches_single_interpolants():
    rng = np.random.default_rng(4)
    data = rng.standard_normal((5, 3, 2))
    noise = rng.standard_normal((5, 3, 2))
    gammas = rng.uniform(0.0, 1.0, size=5)
    batched = interpolate_batch(data, noise, gammas)
    for b in range(5):
        single = make_interpolant(ActionChunk(data[b]), ActionChunk(noise[b]), gammas[b])
        np.testing.assert_allclose(batched[b], single.a_gamma.values, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("gammas", [np.array([0.5, 1.2]), np.array([0.5, np.nan]), np.array([0.5])])
def test_interpolate_batch_rejects_bad_gammas(gammas):
    with pytest.raises(InvalidArgumentError):
        interpolate_batch(np.zeros((2, 2, 1)), np.zeros((2, 2, 1)), gammas)


@pytest.mark.parametrize(
    "values, expected",
    [
        ([[2.0]], 2.0),
        ([[-2.0]], 2.0),
        ([[1.0, 1.0], [1.0, 1.0]], 1.0),
    ],
)
def test_normalized_residual_examples(values, expected):
    assert normalized_residual(np.array(values)) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("scale", [-3.0, -1.0, -0.5, 0.0, 0.25, 2.0, 10.0])
def test_normalized_residual_is_absolutely_homogeneous(scale):
    values = np.random.default_rng(7).standard_normal((4, 2))
    expected = abs(scale) * normalized_residual(values)
    assert normalized_residual(scale * values) == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_normalized_residual_rejects_non_finite():
    with pytest.raises(NumericError):
        normalized_residual(np.array([[np.inf, 0.0]]))


def test_flatten_is_row_major_with_contiguous_prefix():
    values = np.arange(8.0).reshape(4, 2)
    flat = chunk_flatten(ActionChunk(values))
    np.testing.assert_array_equal(flat, np.arange(8.0))
    np.testing.assert_array_equal(flat[:4], values[:2].ravel())
    np.testing.assert_array_equal(chunk_unflatten(flat, 4, 2).values, values)


def test_unflatten_rejects_wrong_length():
    with pytest.raises(InvalidArgumentError):
        chunk_unflatten(np.zeros(7), 4, 2)
