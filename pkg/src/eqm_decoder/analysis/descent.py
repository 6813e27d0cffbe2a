"""
Descent and minimum-residual checks for plain gradient steps on a known energy.
"""
from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..core import ActionChunk
from ..errors import ContractError, InvalidArgumentError
from ..field import AnalyticField
from ..solver import SolverConfig, analytic_evaluator, nesterov_step

SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class DescentReport:
    """
    Energies and residuals of K gradient steps with the minimum-residual bound per prefix.

    bounds[K'−1] = 2(E_0 − E*)/(η K' H d) bounds min_{j<K'} r_j².
    """

    energies: np.ndarray  # E(A_0) .. E(A_K)
    residuals: np.ndarray  # r_0 .. r_{K-1}
    bounds: np.ndarray  # prefixes K' = 1 .. K
    min_squared_residuals: np.ndarray  # min_{j<K'} r_j², prefixes 1 .. K
    violated: bool
    within_hypothesis: bool
    step_size: float
    lipschitz: float

    def to_frame(self) -> pd.DataFrame:
        steps = self.residuals.size
        return pd.DataFrame({
            "k": np.arange(steps),
            "energy": self.energies[:steps],
            "residual": self.residuals,
            "bound": self.bounds,
        })


def check_descent(field: AnalyticField, cfg: SolverConfig, init: ActionChunk, iterations: int) -> DescentReport:
    """
    Run K momentum-free steps A ← A − η∇E(A) and test monotone descent and the residual bound.

    Args:
        field: Conservative analytic field with known energy
        cfg: Solver settings; momentum must be zero
        init: A_0
        iterations: K ≥ 1

    Returns:
        The descent report; violated is meaningful when within_hypothesis (η ≤ 1/L)
    """
    if cfg.momentum != 0.0:
        raise ContractError("descent guarantees hold only without momentum", hypothesis="momentum == 0")
    if not field.is_conservative:
        raise ContractError("descent needs a gradient field", hypothesis="conservative field")
    if iterations < 1:
        raise InvalidArgumentError(f"iterations must be at least 1, got {iterations}", argument="iterations")
    init.require_shape(field.horizon, field.dim)

    evaluator = analytic_evaluator(field)
    energies = [field.energy(init)]
    residuals = []
    current = init
    for k in range(iterations):
        current, residual = nesterov_step(current, current, cfg, evaluator, None, iteration=k)
        residuals.append(residual)
        energies.append(field.energy(current))

    energy_arr = np.array(energies)
    residual_arr = np.array(residuals)
    size = field.horizon * field.dim
    gap = energy_arr[0] - field.minimum_energy
    prefixes = np.arange(1, iterations + 1)
    bounds = 2.0 * gap / (cfg.step_size * prefixes * size)
    min_squared = np.minimum.accumulate(residual_arr ** 2)

    bound_violated = bool(np.any(min_squared > bounds + SLACK * np.maximum(1.0, bounds)))
    energy_increased = bool(np.any(np.diff(energy_arr) > SLACK))

    return DescentReport(
        energies=energy_arr,
        residuals=residual_arr,
        bounds=bounds,
        min_squared_residuals=min_squared,
        violated=bound_violated or energy_increased,
        within_hypothesis=cfg.step_size <= (1.0 + SLACK) / field.lipschitz,
        step_size=cfg.step_size,
        lipschitz=field.lipschitz,
    )

