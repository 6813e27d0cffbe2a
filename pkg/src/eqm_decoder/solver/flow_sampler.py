"""
Forward Euler sampler for the time-conditioned flow baseline.
"""
from typing import Optional

import numpy as np

from ..core import ActionChunk, Condition
from ..errors import InvalidArgumentError, NumericError, SolverDivergenceError
from .evaluators import TimeFieldEvaluator


def euler_flow_sample(
    evaluator: TimeFieldEvaluator,
    cond: Optional[Condition],
    steps: int,
    rng: np.random.Generator,
    horizon: int,
    dim: int,
) -> ActionChunk:
    """
    Integrate dA/dγ = f(A; c, γ) from noise at γ=0 to γ=1.

    Step i evaluates the field at γ = i/K, so K steps cost exactly K evaluations.

    Args:
        evaluator: Time-conditioned field evaluator
        cond: Condition passed to the evaluator
        steps: Number of uniform Euler steps K ≥ 1
        rng: Source of the initial noise
        horizon: H
        dim: d

    Returns:
        The chunk at γ = 1
    """
    if steps < 1:
        raise InvalidArgumentError(f"steps must be at least 1, got {steps}", argument="steps")
    dt = 1.0 / steps
    state = rng.standard_normal((horizon, dim))
    for i in range(steps):
        try:
            velocity = np.asarray(evaluator(ActionChunk(state), cond, i * dt), dtype=np.float64)
        except NumericError as e:
            raise SolverDivergenceError(f"non-finite flow state: {e.message}", iteration=i) from e
        state = state + dt * velocity
        if not np.all(np.isfinite(state)):
            raise SolverDivergenceError("non-finite flow state", iteration=i)
    return ActionChunk(state)
