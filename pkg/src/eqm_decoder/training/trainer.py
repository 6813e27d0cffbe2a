"""
Minibatch training loop shared by the equilibrium-matching and flow objectives.
"""
from dataclasses import dataclass, field
from typing import Any, Tuple

import numpy as np

from ..config import config
from ..errors import ConfigurationError, NumericError, TrainingDivergenceError
from ..field import FieldParams
from ..logging import get_logger
from .dataset import Dataset
from .objectives import eqm_loss, flow_loss
from .optim import OPTIMIZER_TAGS, make_optimizer
from .schedule import ScheduleSpec

logger = get_logger(__name__)

OBJECTIVES = ("eqm", "flow")


@dataclass(frozen=True)
class TrainConfig:
    steps: int = 20000
    batch_size: int = 64
    learning_rate: float = 1e-3
    optimizer: str = "adam"
    seed: int = 0
    schedule: ScheduleSpec = field(default_factory=ScheduleSpec)
    objective: str = "eqm"
    log_every: int = 1000

    def __post_init__(self) -> None:
        if self.steps < 0:
            raise ConfigurationError(f"steps must be non-negative, got {self.steps}", config_key="training.steps")
        if self.batch_size < 1:
            raise ConfigurationError(f"batch size must be positive, got {self.batch_size}",
                                     config_key="training.batch_size")
        if not self.learning_rate > 0:
            raise ConfigurationError(f"learning rate must be positive, got {self.learning_rate}",
                                     config_key="training.learning_rate")
        if self.optimizer not in OPTIMIZER_TAGS:
            raise ConfigurationError(f"unknown optimizer '{self.optimizer}'", config_key="training.optimizer")
        if self.objective not in OBJECTIVES:
            raise ConfigurationError(f"unknown objective '{self.objective}'", config_key="training.objective")

    @classmethod
    def from_settings(cls, **overrides: Any) -> "TrainConfig":
        """Defaults from settings.yaml, then keyword overrides."""
        values = dict(
            steps=int(config.get("training.steps", 20000)),
            batch_size=int(config.get("training.batch_size", 64)),
            learning_rate=float(config.get("training.learning_rate", 1e-3)),
            optimizer=config.get("training.optimizer", "adam"),
            seed=int(config.get("training.seed", 0)),
            schedule=ScheduleSpec.from_settings(),
            objective=config.get("training.objective", "eqm"),
            log_every=int(config.get("training.log_every", 1000)),
        )
        values.update(overrides)
        return cls(**values)


def train(
    dataset: Dataset,
    train_config: TrainConfig,
    initial_params: FieldParams,
) -> Tuple[FieldParams, np.ndarray]:
    """
    Minimize the configured objective by minibatch first-order updates.

    Minibatches are drawn with replacement from a generator seeded with
    train_config.seed, which also supplies every ε and γ draw.

    Args:
        dataset: Normalized demonstrations
        train_config: Training hyperparameters
        initial_params: Starting parameters (not modified)

    Returns:
        (final parameters, per-step loss curve)
    """
    field_config = initial_params.config
    if dataset.horizon != field_config.horizon or dataset.action_dim != field_config.action_dim:
        raise ConfigurationError("dataset chunk shape does not match the field", config_key="field")
    if dataset.cond_width != field_config.cond_width:
        raise ConfigurationError("dataset condition width does not match the field", config_key="field")
    wants_time = train_config.objective == "flow"
    if field_config.time_conditioned != wants_time:
        raise ConfigurationError(
            f"objective '{train_config.objective}' needs time_conditioned={wants_time}",
            config_key="field.time_conditioned",
        )

    if train_config.steps == 0:
        return initial_params.copy(), np.empty(0)

    logger.info(
        "Starting training",
        objective=train_config.objective,
        steps=train_config.steps,
        records=dataset.size,
        parameter_count=initial_params.parameter_count,
    )

    rng = np.random.default_rng(train_config.seed)
    optimizer = make_optimizer(train_config.optimizer, train_config.learning_rate)
    params = initial_params.copy()
    vector = params.to_vector()
    losses = np.empty(train_config.steps)

    for step in range(train_config.steps):
        batch = dataset.batch(rng.integers(0, dataset.size, size=train_config.batch_size))
        try:
            if wants_time:
                loss, grad = flow_loss(params, batch, rng)
            else:
                loss, grad = eqm_loss(params, batch, train_config.schedule, rng)
            if not np.isfinite(loss):
                raise NumericError("non-finite loss", operation="train")
            vector = optimizer.step(vector, grad.to_vector())
            params = FieldParams.from_vector(field_config, vector)
        except NumericError as e:
            logger.error("Training diverged", step=step, error=e.message)
            raise TrainingDivergenceError(f"training diverged at step {step}: {e.message}", step=step) from e

        losses[step] = loss
        if train_config.log_every and (step + 1) % train_config.log_every == 0:
            logger.info("Training progress", step=step + 1, loss=float(loss))

    logger.info("Training finished", final_loss=float(losses[-1]))
    return params, losses
