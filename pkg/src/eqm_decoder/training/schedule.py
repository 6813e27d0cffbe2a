"""
Weight schedules w(γ) for the equilibrium-matching target.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..config import config
from ..errors import ConfigurationError, InvalidArgumentError


class ScheduleKind(str, Enum):
    LINEAR = "linear"
    TRUNCATED_LINEAR = "truncated_linear"


@dataclass(frozen=True)
class ScheduleSpec:
    """w(γ) = 1 − γ (linear) or min(slope·(1 − γ), 1) (truncated_linear)."""

    kind: ScheduleKind = ScheduleKind.LINEAR
    slope: float = 4.0

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "kind", ScheduleKind(self.kind))
        except ValueError as e:
            raise ConfigurationError(
                f"unknown schedule kind '{self.kind}'",
                config_key="training.schedule.kind",
            ) from e
        if not self.slope > 0:
            raise ConfigurationError(f"slope must be positive, got {self.slope}", config_key="training.schedule.slope")

    @classmethod
    def from_settings(cls) -> "ScheduleSpec":
        return cls(
            kind=config.get("training.schedule.kind", "linear"),
            slope=float(config.get("training.schedule.slope", 4.0)),
        )


def schedule_weights(gammas: np.ndarray, spec: ScheduleSpec) -> np.ndarray:
    """Vectorized w(γ); gammas must lie in [0, 1]."""
    gammas = np.asarray(gammas, dtype=np.float64)
    if np.any(gammas < 0.0) or np.any(gammas > 1.0):
        raise InvalidArgumentError("gamma must lie in [0, 1]", argument="gamma")
    remaining = 1.0 - gammas
    if spec.kind is ScheduleKind.LINEAR:
        return remaining
    return np.minimum(spec.slope * remaining, 1.0)


def weight_schedule(gamma: float, spec: ScheduleSpec) -> float:
    """
    Scalar weight multiplying the equilibrium-matching target.

    Args:
        gamma: Interpolation factor in [0, 1]
        spec: Schedule definition

    Returns:
        w(γ), non-negative, non-increasing in γ, and exactly 0 at γ = 1
    """
    return float(schedule_weights(np.array([gamma]), spec)[0])
