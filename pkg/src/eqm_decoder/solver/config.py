"""
Solver and warm-start configuration.
"""
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any

from ..config import config
from ..core import ActionChunk
from ..errors import ConfigurationError


class WarmStartMode(str, Enum):
    SHIFTED = "shifted"  # rows e .. e+H/2-1 of the previous output
    LEADING = "leading"  # rows 0 .. H/2-1 of the previous output


@dataclass(frozen=True)
class SolverConfig:
    """Nesterov equilibrium solver settings: η, μ, τ and K_max."""

    step_size: float = 0.1
    momentum: float = 0.9
    threshold: float = 1e-3
    max_iterations: int = 300
    record_iterates: bool = False

    def __post_init__(self) -> None:
        if not self.step_size > 0:
            raise ConfigurationError(f"step size must be positive, got {self.step_size}",
                                     config_key="solver.step_size")
        if not 0.0 <= self.momentum < 1.0:
            raise ConfigurationError(f"momentum must lie in [0, 1), got {self.momentum}",
                                     config_key="solver.momentum")
        if not self.threshold >= 0:
            raise ConfigurationError(f"threshold must be non-negative, got {self.threshold}",
                                     config_key="solver.threshold")
        if self.max_iterations < 1:
            raise ConfigurationError(f"iteration cap must be at least 1, got {self.max_iterations}",
                                     config_key="solver.max_iterations")

    @classmethod
    def from_settings(cls, **overrides: Any) -> "SolverConfig":
        base = cls(
            step_size=float(config.get("solver.step_size", 0.1)),
            momentum=float(config.get("solver.momentum", 0.9)),
            threshold=float(config.get("solver.threshold", 1e-3)),
            max_iterations=int(config.get("solver.max_iterations", 300)),
        )
        return replace(base, **overrides) if overrides else base


@dataclass(frozen=True)
class WarmStartState:
    """The previous cycle's output chunk and how many of its steps were executed."""

    previous: ActionChunk
    executed: int = 1

    def __post_init__(self) -> None:
        if self.executed < 1:
            raise ConfigurationError(f"executed steps must be at least 1, got {self.executed}",
                                     config_key="envs.executed_steps")
