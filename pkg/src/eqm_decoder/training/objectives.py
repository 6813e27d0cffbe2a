"""
Training objectives: equilibrium matching and the conditional flow-matching baseline.

Both draw, per sample, fresh noise ε ~ N(0, I) and γ ~ U(0, 1) (noise first,
then γ) and regress the field at the interpolant A_γ = γA + (1 − γ)ε.
"""
from typing import Optional, Tuple

import numpy as np

from ..core import interpolate_batch
from ..errors import ConfigurationError, InvalidArgumentError
from ..field import FieldBatch, FieldParams, field_param_gradient
from .dataset import DemoBatch
from .schedule import ScheduleSpec, schedule_weights


def _draw(batch: DemoBatch, rng: np.random.Generator, gamma: Optional[float]) -> Tuple[np.ndarray, np.ndarray]:
    if batch.size == 0:
        raise InvalidArgumentError("training batch is empty", argument="batch")
    noise = rng.standard_normal(batch.chunks.shape)
    gammas = rng.uniform(0.0, 1.0, size=batch.size)
    if gamma is not None:
        gammas = np.full(batch.size, float(gamma))
    return noise, gammas


def eqm_loss(
    params: FieldParams,
    batch: DemoBatch,
    spec: ScheduleSpec,
    rng: np.random.Generator,
    gamma: Optional[float] = None,
) -> Tuple[float, FieldParams]:
    """
    Equilibrium-matching loss and its parameter gradient.

    The target at A_γ is w(γ)(ε − A): the field points away from the data so
    that the descent update A ← A − ηf(A) moves toward it, and it vanishes on
    the data itself because w(1) = 0.

    Args:
        params: Time-free field parameters
        batch: Demonstration minibatch
        spec: Weight schedule
        rng: Source of ε and γ
        gamma: Force every sample's γ (the draws still happen)

    Returns:
        (mean squared error, gradient)
    """
    if params.config.time_conditioned:
        raise ConfigurationError("equilibrium matching needs a time-free field", config_key="field.time_conditioned")
    noise, gammas = _draw(batch, rng, gamma)
    weights = schedule_weights(gammas, spec)[:, None, None]
    field_batch = FieldBatch(
        chunks=interpolate_batch(batch.chunks, noise, gammas),
        conds=batch.conds,
        targets=weights * (noise - batch.chunks),
    )
    return field_param_gradient(params, field_batch)


def flow_loss(
    params: FieldParams,
    batch: DemoBatch,
    rng: np.random.Generator,
    gamma: Optional[float] = None,
) -> Tuple[float, FieldParams]:
    """
    Conditional flow-matching loss: f(A_γ; c, γ) regresses the velocity A − ε.

    Args:
        params: Time-conditioned field parameters
        batch: Demonstration minibatch
        rng: Source of ε and γ
        gamma: Force every sample's γ (the draws still happen)

    Returns:
        (mean squared error, gradient)
    """
    if not params.config.time_conditioned:
        raise ConfigurationError("flow matching needs a time-conditioned field", config_key="field.time_conditioned")
    noise, gammas = _draw(batch, rng, gamma)
    field_batch = FieldBatch(
        chunks=interpolate_batch(batch.chunks, noise, gammas),
        conds=batch.conds,
        targets=batch.chunks - noise,
        times=gammas,
    )
    return field_param_gradient(params, field_batch)
