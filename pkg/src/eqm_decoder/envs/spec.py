"""
Task definitions for the toy point-agent environments.
"""
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Optional

from ..config import config
from ..errors import ConfigurationError


class EnvKind(str, Enum):
    REACH = "reach"
    TWO_WAYPOINT = "two_waypoint"
    PRESS = "press"


KIND_CODES = {EnvKind.REACH: 0, EnvKind.TWO_WAYPOINT: 1, EnvKind.PRESS: 2}

# Targets are drawn this far inside the workspace bounds
TARGET_MARGIN = 0.1
# Consecutive in-precision steps needed to register a press
PRESS_DWELL = 2


@dataclass(frozen=True)
class EnvSpec:
    """A point agent in the box [low, high]^d moving toward one or two targets."""

    kind: EnvKind = EnvKind.REACH
    low: float = 0.0
    high: float = 1.0
    tolerance: float = 0.05
    max_cycles: int = 60
    horizon: int = 8
    action_dim: int = 2
    process_noise: float = 0.002
    step_scale: float = 0.1
    expert_gain: float = 5.0
    executed_steps: int = 1

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "kind", EnvKind(self.kind))
        except ValueError as e:
            raise ConfigurationError(f"unknown env kind '{self.kind}'", config_key="envs.kind") from e
        if not self.tolerance > 0:
            raise ConfigurationError(f"tolerance must be positive, got {self.tolerance}", config_key="envs.tolerance")
        if not self.high - self.low > 2 * TARGET_MARGIN:
            raise ConfigurationError("workspace is too small", config_key="envs.high")
        if self.horizon < 2 or self.horizon % 2:
            raise ConfigurationError(f"horizon must be even, got {self.horizon}", config_key="envs.horizon")
        if self.action_dim < 1 or self.max_cycles < 1:
            raise ConfigurationError("action_dim and max_cycles must be positive", config_key="envs.action_dim")
        if self.process_noise < 0 or not self.step_scale > 0 or not self.expert_gain > 0:
            raise ConfigurationError("noise must be non-negative, step scale and gain positive",
                                     config_key="envs.process_noise")
        if not 1 <= self.executed_steps <= self.horizon // 2:
            raise ConfigurationError(
                f"executed steps must lie in [1, {self.horizon // 2}], got {self.executed_steps}",
                config_key="envs.executed_steps",
            )

    @classmethod
    def from_settings(cls, kind: Optional[str] = None, **overrides: Any) -> "EnvSpec":
        base = cls(
            kind=kind or config.get("envs.kind", "reach"),
            low=float(config.get("envs.low", 0.0)),
            high=float(config.get("envs.high", 1.0)),
            tolerance=float(config.get("envs.tolerance", 0.05)),
            max_cycles=int(config.get("envs.max_cycles", 60)),
            horizon=int(config.get("envs.horizon", 8)),
            action_dim=int(config.get("envs.action_dim", 2)),
            process_noise=float(config.get("envs.process_noise", 0.002)),
            step_scale=float(config.get("envs.step_scale", 0.1)),
            expert_gain=float(config.get("envs.expert_gain", 5.0)),
            executed_steps=int(config.get("envs.executed_steps", 1)),
        )
        return replace(base, **overrides) if overrides else base

    @property
    def kind_code(self) -> int:
        return KIND_CODES[self.kind]

    @property
    def n_targets(self) -> int:
        return 2 if self.kind is EnvKind.TWO_WAYPOINT else 1

    @property
    def state_width(self) -> int:
        """Position plus the progress fraction."""
        return self.action_dim + 1

    @property
    def cond_width(self) -> int:
        return self.state_width + self.action_dim

    @property
    def center(self) -> float:
        return 0.5 * (self.low + self.high)
