"""
Shared domain types for the EqM action decoder.
Action chunks, conditions, interpolants and the normalized residual.

Layout contract: a chunk of shape (H, d) flattens row-major, time step by
time step, so the first H/2 rows of a chunk are a contiguous prefix of its
flat vector. Checkpoints and dataset files depend on this layout.
"""
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import InvalidArgumentError, NumericError

ArrayLike = Union[np.ndarray, list, tuple]


def _as_float_array(values: ArrayLike, name: str) -> np.ndarray:
    array = np.array(values, dtype=np.float64)
    if not np.all(np.isfinite(array)):
        raise NumericError(f"{name} contains non-finite entries", operation=name)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ActionChunk:
    """An H×d matrix of consecutive normalized actions."""

    values: np.ndarray

    def __post_init__(self) -> None:
        array = _as_float_array(self.values, "ActionChunk")
        if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
            raise InvalidArgumentError(
                f"ActionChunk must be a non-empty H×d matrix, got shape {array.shape}",
                argument="values",
            )
        object.__setattr__(self, "values", array)

    @property
    def horizon(self) -> int:
        return int(self.values.shape[0])

    @property
    def dim(self) -> int:
        return int(self.values.shape[1])

    @property
    def shape(self) -> tuple:
        return self.values.shape

    def require_shape(self, horizon: int, dim: int) -> "ActionChunk":
        """Raise InvalidArgumentError unless the chunk is exactly horizon×dim."""
        if self.values.shape != (horizon, dim):
            raise InvalidArgumentError(
                f"Expected a {horizon}x{dim} chunk, got {self.values.shape}",
                argument="chunk",
            )
        return self


@dataclass(frozen=True, eq=False)
class Condition:
    """State features concatenated with goal features."""

    state: np.ndarray
    goal: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "state", _as_float_array(np.ravel(self.state), "Condition.state"))
        object.__setattr__(self, "goal", _as_float_array(np.ravel(self.goal), "Condition.goal"))

    @classmethod
    def from_vector(cls, vector: ArrayLike, state_width: int) -> "Condition":
        """Split a flat condition vector into state and goal parts."""
        flat = np.ravel(np.asarray(vector, dtype=np.float64))
        if not 0 <= state_width <= flat.size:
            raise InvalidArgumentError(
                f"state width {state_width} does not fit a vector of length {flat.size}",
                argument="state_width",
            )
        return cls(state=flat[:state_width], goal=flat[state_width:])

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.state, self.goal])

    @property
    def width(self) -> int:
        return int(self.state.size + self.goal.size)

    def require_width(self, width: int) -> "Condition":
        if self.width != width:
            raise InvalidArgumentError(
                f"Expected a condition of width {width}, got {self.width}",
                argument="cond",
            )
        return self


@dataclass(frozen=True, eq=False)
class Interpolant:
    """Convex combination gamma·data + (1 − gamma)·noise."""

    a_gamma: ActionChunk
    gamma: float
    data: ActionChunk
    noise: ActionChunk


def interpolate_batch(data: ArrayLike, noise: ArrayLike, gammas: ArrayLike) -> np.ndarray:
    """
    Interpolants of a batch of chunks: gammas[b]·data[b] + (1 − gammas[b])·noise[b].

    Args:
        data: (B, H, d) demonstration chunks
        noise: (B, H, d) noise chunks
        gammas: (B,) interpolation factors in [0, 1]

    Returns:
        (B, H, d) interpolants
    """
    data = np.asarray(data, dtype=np.float64)
    noise = np.asarray(noise, dtype=np.float64)
    gammas = np.asarray(gammas, dtype=np.float64)
    if data.shape != noise.shape:
        raise InvalidArgumentError(
            f"data {data.shape} and noise {noise.shape} shapes differ",
            argument="noise",
        )
    if data.ndim != 3 or gammas.shape != (data.shape[0],):
        raise InvalidArgumentError(
            f"gammas {gammas.shape} must hold one factor per chunk of {data.shape}",
            argument="gamma",
        )
    if not np.all((gammas >= 0.0) & (gammas <= 1.0)):
        raise InvalidArgumentError(f"gamma must lie in [0, 1], got {gammas.tolist()}", argument="gamma")
    g = gammas[:, None, None]
    return g * data + (1.0 - g) * noise


def make_interpolant(data: ActionChunk, noise: ActionChunk, gamma: float) -> Interpolant:
    """
    Build the training interpolant between a data chunk and a noise chunk.

    Args:
        data: Demonstration chunk A
        noise: Noise chunk of the same shape
        gamma: Interpolation factor in [0, 1]

    Returns:
        Interpolant with a_gamma = gamma·data + (1 − gamma)·noise
    """
    gamma = float(gamma)
    a_gamma = interpolate_batch(data.values[None], noise.values[None], np.array([gamma]))[0]
    return Interpolant(a_gamma=ActionChunk(a_gamma), gamma=gamma, data=data, noise=noise)


def normalized_residual(field_output: ArrayLike) -> float:
    """
    Frobenius norm of an H×d field output divided by sqrt(H·d).

    Args:
        field_output: Field value at a lookahead point

    Returns:
        The normalized residual, always ≥ 0
    """
    values = np.asarray(field_output, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise NumericError("field output contains non-finite entries", operation="normalized_residual")
    if values.size == 0:
        raise InvalidArgumentError("field output is empty", argument="field_output")
    return float(np.linalg.norm(values.ravel()) / np.sqrt(values.size))


def chunk_flatten(chunk: ActionChunk) -> np.ndarray:
    """Flatten a chunk row-major into a length-H·d vector."""
    return np.ravel(chunk.values, order="C").copy()


def chunk_unflatten(vector: ArrayLike, horizon: int, dim: int) -> ActionChunk:
    """
    Rebuild an H×d chunk from its row-major flat vector.

    Args:
        vector: Length H·d vector
        horizon: Number of time steps H
        dim: Action dimension d

    Returns:
        The chunk whose row h holds vector[h·d:(h+1)·d]
    """
    flat = np.ravel(np.asarray(vector, dtype=np.float64))
    if horizon < 1 or dim < 1:
        raise InvalidArgumentError(f"invalid chunk dims {horizon}x{dim}", argument="horizon")
    if flat.size != horizon * dim:
        raise InvalidArgumentError(
            f"vector of length {flat.size} cannot form a {horizon}x{dim} chunk",
            argument="vector",
        )
    return ActionChunk(flat.reshape(horizon, dim, order="C"))
