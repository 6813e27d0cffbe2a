"""
Closed-form vector fields with known equilibria, energies and smoothness.

These are the measurement instruments for the solver analysis: the
conservative kinds are gradients of a quadratic energy, the rotation kind adds
a divergence-free skew component that no energy can produce.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ..core import ActionChunk
from ..errors import ContractError, InvalidArgumentError


class AnalyticKind(str, Enum):
    LINEAR_CONTRACTION = "linear_contraction"
    QUADRATIC_ENERGY_GRADIENT = "quadratic_energy_gradient"
    ROTATION = "rotation"


def skew_rotate(values: np.ndarray) -> np.ndarray:
    """
    Apply the block-diagonal 90° rotation J to a chunk's flat coordinates.

    Coordinates are paired (0, 1), (2, 3), ... in row-major order; each pair
    (x, y) maps to (−y, x). An unpaired last coordinate maps to zero.
    """
    flat = np.ravel(values)
    rotated = np.zeros_like(flat)
    n_pairs = flat.size // 2
    x = flat[0:2 * n_pairs:2]
    y = flat[1:2 * n_pairs:2]
    rotated[0:2 * n_pairs:2] = -y
    rotated[1:2 * n_pairs:2] = x
    return rotated.reshape(np.shape(values))


@dataclass(frozen=True, eq=False)
class AnalyticField:
    """
    f(A) = κ·S⊙(A − A*) for the conservative kinds, κ(A − A*) + ωJ(A − A*) for rotation.

    S holds optional per-coordinate stiffness multipliers in (0, 1]; it
    defaults to all ones and is only meaningful for the conservative kinds.
    """

    kind: AnalyticKind
    equilibrium: ActionChunk
    stiffness: float = 1.0
    rotation: float = 0.0
    scales: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", AnalyticKind(self.kind))
        if not self.stiffness > 0:
            raise InvalidArgumentError(f"stiffness must be positive, got {self.stiffness}", argument="stiffness")
        if self.scales is not None:
            if self.kind is AnalyticKind.ROTATION:
                raise InvalidArgumentError("stiffness scales apply to conservative kinds only", argument="scales")
            scales = np.array(self.scales, dtype=np.float64)
            if scales.shape != self.equilibrium.shape or np.any(scales <= 0) or np.any(scales > 1):
                raise InvalidArgumentError(
                    "scales must match the chunk shape with entries in (0, 1]",
                    argument="scales",
                )
            scales.setflags(write=False)
            object.__setattr__(self, "scales", scales)
        if self.kind is not AnalyticKind.ROTATION and self.rotation != 0.0:
            raise InvalidArgumentError("rotation strength requires the rotation kind", argument="rotation")

    @property
    def horizon(self) -> int:
        return self.equilibrium.horizon

    @property
    def dim(self) -> int:
        return self.equilibrium.dim

    @property
    def is_conservative(self) -> bool:
        return self.kind is not AnalyticKind.ROTATION or self.rotation == 0.0

    @property
    def lipschitz(self) -> float:
        """Smoothness constant L of the field (its operator norm)."""
        if self.kind is AnalyticKind.ROTATION:
            return float(np.hypot(self.stiffness, self.rotation))
        if self.scales is None:
            return float(self.stiffness)
        return float(self.stiffness * np.max(self.scales))

    @property
    def minimum_energy(self) -> float:
        return 0.0

    def _stiffness_map(self) -> np.ndarray:
        if self.scales is None:
            return np.full(self.equilibrium.shape, self.stiffness)
        return self.stiffness * self.scales

    def energy(self, chunk: ActionChunk) -> float:
        """½ Σ κ S (A − A*)², defined only for conservative fields."""
        if not self.is_conservative:
            raise ContractError("rotation fields have no energy", hypothesis="conservative field")
        chunk.require_shape(self.horizon, self.dim)
        offset = chunk.values - self.equilibrium.values
        return float(0.5 * np.sum(self._stiffness_map() * offset * offset))

    def evaluate(self, values: np.ndarray) -> np.ndarray:
        offset = np.asarray(values, dtype=np.float64) - self.equilibrium.values
        if self.kind is AnalyticKind.ROTATION:
            return self.stiffness * offset + self.rotation * skew_rotate(offset)
        return self._stiffness_map() * offset


def analytic_eval(field: AnalyticField, chunk: ActionChunk) -> np.ndarray:
    """
    Exact closed-form evaluation of an analytic field.

    Args:
        field: The analytic field
        chunk: Point of evaluation, same shape as the equilibrium

    Returns:
        H×d field value
    """
    chunk.require_shape(field.horizon, field.dim)
    return field.evaluate(chunk.values)
