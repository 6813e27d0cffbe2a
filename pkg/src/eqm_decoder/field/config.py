"""
Architecture configuration for the conditional vector field.
"""
from dataclasses import dataclass, field, replace
from typing import Any, List, Sequence, Tuple

from ..config import config
from ..errors import ConfigurationError

# Activation tags and their checkpoint codes
ACTIVATION_CODES = {"tanh": 0, "linear": 1}


@dataclass(frozen=True)
class FieldConfig:
    """
    Shape of the field network f(A; c) or, for the flow baseline, f(A; c, t).

    The network input is [flatten(A); c] (plus the scalar time when
    time_conditioned) and the output is an H×d matrix.
    """

    horizon: int
    action_dim: int
    cond_width: int
    hidden_widths: Tuple[int, ...] = field(default=(128, 128))
    activation: str = "tanh"
    time_conditioned: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "hidden_widths", tuple(int(w) for w in self.hidden_widths))
        if self.horizon < 1 or self.action_dim < 1:
            raise ConfigurationError(
                f"horizon and action_dim must be positive, got {self.horizon}x{self.action_dim}",
                config_key="field.horizon",
            )
        if self.cond_width < 0:
            raise ConfigurationError("cond_width must be non-negative", config_key="field.cond_width")
        if any(w < 1 for w in self.hidden_widths):
            raise ConfigurationError(
                f"hidden widths must be positive, got {list(self.hidden_widths)}",
                config_key="field.hidden_widths",
            )
        if self.activation not in ACTIVATION_CODES:
            raise ConfigurationError(
                f"unknown activation '{self.activation}'",
                config_key="field.activation",
                details={"allowed": sorted(ACTIVATION_CODES)},
            )

    @classmethod
    def from_settings(
        cls,
        horizon: int,
        action_dim: int,
        cond_width: int,
        time_conditioned: bool = False,
        **overrides: Any,
    ) -> "FieldConfig":
        """Build a config with architecture defaults from settings.yaml."""
        base = cls(
            horizon=horizon,
            action_dim=action_dim,
            cond_width=cond_width,
            hidden_widths=tuple(config.get("field.hidden_widths", [128, 128])),
            activation=config.get("field.activation", "tanh"),
            time_conditioned=time_conditioned,
        )
        return replace(base, **overrides) if overrides else base

    @property
    def chunk_size(self) -> int:
        return self.horizon * self.action_dim

    @property
    def input_width(self) -> int:
        return self.chunk_size + self.cond_width + (1 if self.time_conditioned else 0)

    @property
    def output_width(self) -> int:
        return self.chunk_size

    @property
    def activation_code(self) -> int:
        return ACTIVATION_CODES[self.activation]

    def layer_shapes(self) -> List[Tuple[int, int]]:
        """(fan_in, fan_out) of every affine layer, input to output."""
        widths: Sequence[int] = (self.input_width, *self.hidden_widths, self.output_width)
        return list(zip(widths[:-1], widths[1:]))
