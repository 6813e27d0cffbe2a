"""
Multilayer-perceptron vector field with exact reverse-mode parameter gradients.

Every layer computes z = h @ W + b with W stored as (fan_in, fan_out). Hidden
layers apply the configured activation; the output layer is affine. All
arithmetic is float64.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..core import ActionChunk, Condition
from ..errors import InvalidArgumentError, NumericError, handle_numeric_error
from .config import FieldConfig


@dataclass
class FieldParams:
    """Per-layer weights and biases of a field network, input layer first."""

    config: FieldConfig
    weights: List[np.ndarray]
    biases: List[np.ndarray]

    def __post_init__(self) -> None:
        shapes = self.config.layer_shapes()
        if len(self.weights) != len(shapes) or len(self.biases) != len(shapes):
            raise InvalidArgumentError(
                f"expected {len(shapes)} layers, got {len(self.weights)} weights and {len(self.biases)} biases",
                argument="weights",
            )
        for index, ((fan_in, fan_out), w, b) in enumerate(zip(shapes, self.weights, self.biases)):
            if w.shape != (fan_in, fan_out) or b.shape != (fan_out,):
                raise InvalidArgumentError(
                    f"layer {index} has shapes {w.shape}/{b.shape}, expected {(fan_in, fan_out)}/{(fan_out,)}",
                    argument="weights",
                )
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise NumericError("non-finite parameter", layer=layer_name(self.config, index))

    @property
    def parameter_count(self) -> int:
        return int(sum(w.size + b.size for w, b in zip(self.weights, self.biases)))

    def to_vector(self) -> np.ndarray:
        """Concatenate parameters in checkpoint order: W_0, b_0, W_1, b_1, ..."""
        parts = []
        for w, b in zip(self.weights, self.biases):
            parts.append(w.ravel())
            parts.append(b)
        return np.concatenate(parts).astype(np.float64)

    @classmethod
    def from_vector(cls, field_config: FieldConfig, vector: np.ndarray) -> "FieldParams":
        """Inverse of to_vector."""
        vector = np.asarray(vector, dtype=np.float64).ravel()
        weights, biases = [], []
        offset = 0
        for fan_in, fan_out in field_config.layer_shapes():
            end = offset + fan_in * fan_out
            if end + fan_out > vector.size:
                raise InvalidArgumentError("parameter vector too short", argument="vector")
            weights.append(vector[offset:end].reshape(fan_in, fan_out).copy())
            biases.append(vector[end:end + fan_out].copy())
            offset = end + fan_out
        if offset != vector.size:
            raise InvalidArgumentError(
                f"parameter vector has {vector.size} entries, expected {offset}",
                argument="vector",
            )
        return cls(config=field_config, weights=weights, biases=biases)

    def copy(self) -> "FieldParams":
        return FieldParams(
            config=self.config,
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
        )


@dataclass
class FieldBatch:
    """Inputs and regression targets for one gradient evaluation."""

    chunks: np.ndarray  # (B, H, d)
    conds: np.ndarray  # (B, cond_width)
    targets: np.ndarray  # (B, H, d)
    times: Optional[np.ndarray] = None  # (B,)

    @property
    def size(self) -> int:
        return int(self.chunks.shape[0])


def layer_name(field_config: FieldConfig, index: int) -> str:
    if index == len(field_config.hidden_widths):
        return "output"
    return f"hidden_{index + 1}"


def init_params(field_config: FieldConfig, rng_seed: int, zero_output_layer: bool = True) -> FieldParams:
    """
    Fan-in scaled Gaussian initialization.

    Args:
        field_config: Network architecture
        rng_seed: Seed for the weight draws
        zero_output_layer: Zero the final layer so the untrained field is the zero field

    Returns:
        Freshly initialized parameters
    """
    rng = np.random.default_rng(rng_seed)
    shapes = field_config.layer_shapes()
    weights, biases = [], []
    for index, (fan_in, fan_out) in enumerate(shapes):
        is_output = index == len(shapes) - 1
        if is_output and zero_output_layer:
            weights.append(np.zeros((fan_in, fan_out)))
        else:
            weights.append(rng.standard_normal((fan_in, fan_out)) / np.sqrt(fan_in))
        biases.append(np.zeros(fan_out))
    return FieldParams(config=field_config, weights=weights, biases=biases)


def _activate(z: np.ndarray, activation: str) -> np.ndarray:
    if activation == "tanh":
        return np.tanh(z)
    return z


def _activation_derivative(h: np.ndarray, activation: str) -> np.ndarray:
    # Expressed through the activation output h
    if activation == "tanh":
        return 1.0 - h * h
    return np.ones_like(h)


def assemble_inputs(
    field_config: FieldConfig,
    chunks: np.ndarray,
    conds: np.ndarray,
    times: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Stack [flatten(A); c; (t)] rows for a batch.

    Args:
        field_config: Network architecture
        chunks: (B, H, d) chunk values
        conds: (B, cond_width) condition vectors
        times: (B,) times, required iff the config is time conditioned

    Returns:
        (B, input_width) input matrix
    """
    chunks = np.asarray(chunks, dtype=np.float64)
    conds = np.asarray(conds, dtype=np.float64)
    if chunks.ndim != 3 or chunks.shape[1:] != (field_config.horizon, field_config.action_dim):
        raise InvalidArgumentError(
            f"chunks must have shape (B, {field_config.horizon}, {field_config.action_dim}), got {chunks.shape}",
            argument="chunks",
        )
    batch = chunks.shape[0]
    if conds.shape != (batch, field_config.cond_width):
        raise InvalidArgumentError(
            f"conds must have shape ({batch}, {field_config.cond_width}), got {conds.shape}",
            argument="conds",
        )
    parts = [chunks.reshape(batch, -1), conds]
    if field_config.time_conditioned:
        if times is None:
            raise InvalidArgumentError("time-conditioned field requires a time input", argument="time")
        times = np.asarray(times, dtype=np.float64).reshape(batch, 1)
        parts.append(times)
    elif times is not None:
        raise InvalidArgumentError("time-free field does not accept a time input", argument="time")
    return np.concatenate(parts, axis=1)


def _forward(params: FieldParams, inputs: np.ndarray) -> Tuple[List[np.ndarray], np.ndarray]:
    """Run the network, keeping each layer's input for the backward pass."""
    activation = params.config.activation
    n_layers = len(params.weights)
    layer_inputs = []
    h = inputs
    for index, (w, b) in enumerate(zip(params.weights, params.biases)):
        layer_inputs.append(h)
        try:
            z = h @ w + b
            h = z if index == n_layers - 1 else _activate(z, activation)
        except FloatingPointError as e:
            raise NumericError(
                f"non-finite activation in forward pass: {e}",
                layer=layer_name(params.config, index),
                operation="field_forward",
            ) from e
        if not np.all(np.isfinite(h)):
            raise NumericError(
                "non-finite activation in forward pass",
                layer=layer_name(params.config, index),
                operation="field_forward",
            )
    return layer_inputs, h


@handle_numeric_error(operation="field_forward")
def field_forward_batch(
    params: FieldParams,
    chunks: np.ndarray,
    conds: np.ndarray,
    times: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Evaluate the field on a batch; returns (B, H, d)."""
    inputs = assemble_inputs(params.config, chunks, conds, times)
    _, output = _forward(params, inputs)
    return output.reshape(-1, params.config.horizon, params.config.action_dim)


def field_forward(
    params: FieldParams,
    chunk: ActionChunk,
    cond: Condition,
    time: Optional[float] = None,
) -> np.ndarray:
    """
    Evaluate f(A; c) (or f(A; c, t) for a time-conditioned field).

    Args:
        params: Network parameters
        chunk: H×d action chunk
        cond: Condition of the configured width
        time: Interpolation time, supplied iff the field is time conditioned

    Returns:
        H×d field value
    """
    field_config = params.config
    chunk.require_shape(field_config.horizon, field_config.action_dim)
    cond.require_width(field_config.cond_width)
    times = None if time is None else np.array([time], dtype=np.float64)
    return field_forward_batch(params, chunk.values[None], cond.vector[None], times)[0]


@handle_numeric_error(operation="field_param_gradient")
def field_param_gradient(
    params: FieldParams,
    batch: FieldBatch,
    loss_scale: float = 1.0,
) -> Tuple[float, FieldParams]:
    """
    Batch-mean squared error and its exact parameter gradient.

    The loss is loss_scale · mean_b ‖f(x_b) − y_b‖², the squared Frobenius norm
    summed over the H×d entries and averaged over the batch.

    Args:
        params: Network parameters
        batch: Inputs and targets
        loss_scale: Constant multiplier on the loss

    Returns:
        (loss, gradient) with the gradient laid out like params
    """
    if batch.size == 0:
        raise InvalidArgumentError("gradient batch is empty", argument="batch")
    field_config = params.config
    targets = np.asarray(batch.targets, dtype=np.float64)
    if targets.shape != batch.chunks.shape:
        raise InvalidArgumentError(
            f"targets {targets.shape} do not match chunks {batch.chunks.shape}",
            argument="targets",
        )

    inputs = assemble_inputs(field_config, batch.chunks, batch.conds, batch.times)
    layer_inputs, output = _forward(params, inputs)

    output_layer = len(params.weights) - 1
    try:
        residual = output - targets.reshape(batch.size, -1)
        loss = loss_scale * float(np.sum(residual * residual)) / batch.size
        grad_z = (2.0 * loss_scale / batch.size) * residual
    except FloatingPointError as e:
        raise NumericError(
            f"non-finite loss: {e}",
            layer=layer_name(field_config, output_layer),
            operation="field_param_gradient",
        ) from e

    grad_weights: List[np.ndarray] = [np.empty(0)] * len(params.weights)
    grad_biases: List[np.ndarray] = [np.empty(0)] * len(params.biases)
    for index in reversed(range(len(params.weights))):
        h = layer_inputs[index]
        try:
            grad_weights[index] = h.T @ grad_z
            grad_biases[index] = grad_z.sum(axis=0)
            if index > 0:
                grad_h = grad_z @ params.weights[index].T
                grad_z = grad_h * _activation_derivative(h, field_config.activation)
        except FloatingPointError as e:
            raise NumericError(
                f"non-finite gradient in backward pass: {e}",
                layer=layer_name(field_config, index),
                operation="field_param_gradient",
            ) from e
        if not (np.all(np.isfinite(grad_weights[index])) and np.all(np.isfinite(grad_z))):
            raise NumericError(
                "non-finite gradient in backward pass",
                layer=layer_name(field_config, index),
                operation="field_param_gradient",
            )

    return loss, FieldParams(config=field_config, weights=grad_weights, biases=grad_biases)

