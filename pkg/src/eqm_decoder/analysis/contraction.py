"""
Empirical contraction factor of a solver trace around a known equilibrium.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core import ActionChunk
from ..errors import InsufficientDataError
from ..solver import SolverTrace
from .bounds import residual_decay_bound

MAX_RATIO_STEPS = 10
CONVERGED_DISTANCE = 1e-9
RELATIVE_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class ContractionReport:
    rate: float  # ρ̂
    ratios: np.ndarray
    distances: np.ndarray
    geometric_bound_holds: np.ndarray  # d_k ≤ ρ^k d_0 per iterate
    residual_bounds: Optional[np.ndarray] = None
    residual_bound_holds: Optional[np.ndarray] = None

    @property
    def satisfied(self) -> bool:
        holds = bool(np.all(self.geometric_bound_holds))
        if self.residual_bound_holds is not None:
            holds = holds and bool(np.all(self.residual_bound_holds))
        return holds


def estimate_contraction(
    trace: SolverTrace,
    equilibrium: ActionChunk,
    lipschitz: Optional[float] = None,
    rho: Optional[float] = None,
) -> ContractionReport:
    """
    Geometric-mean ratio of successive distances ‖A_k − A*‖ over the first steps.

    Ratios are taken over at most 10 steps and stop once a distance falls
    below 1e-9; a trace that lands on A* exactly reports ρ̂ = 0. The
    geometric bound d_k ≤ ρ^k d_0 is checked at every recorded iterate, and
    with lipschitz given so is r_k ≤ (L/√(Hd)) ρ^k d_0.

    Args:
        trace: Solver trace with recorded iterates
        equilibrium: A*
        lipschitz: Smoothness constant for the residual bound
        rho: Rate used for the bounds; defaults to the estimate

    Returns:
        The contraction report
    """
    if trace.iterates is None:
        raise InsufficientDataError("trace has no recorded iterates", available=0, required=3)
    distances = np.array([
        float(np.linalg.norm(chunk.values - equilibrium.values)) for chunk in trace.iterates
    ])
    converged = bool(np.any(distances[1:] < CONVERGED_DISTANCE))
    if distances.size < 3 and not converged:
        raise InsufficientDataError(
            "contraction needs at least three iterates",
            available=int(distances.size),
            required=3,
        )

    ratios = []
    for k in range(min(MAX_RATIO_STEPS, distances.size - 1)):
        if distances[k] < CONVERGED_DISTANCE:
            break
        ratios.append(distances[k + 1] / distances[k])
        if distances[k + 1] < CONVERGED_DISTANCE:
            break
    ratio_arr = np.array(ratios)
    if ratio_arr.size == 0 or np.any(ratio_arr < CONVERGED_DISTANCE):
        rate = 0.0
    else:
        rate = float(np.exp(np.mean(np.log(ratio_arr))))

    bound_rate = rate if rho is None else rho
    steps = np.arange(distances.size)
    geometric = bound_rate ** steps * distances[0]
    geometric_holds = distances <= geometric * (1.0 + RELATIVE_SLACK) + CONVERGED_DISTANCE

    residual_bounds = residual_holds = None
    if lipschitz is not None:
        horizon, dim = equilibrium.shape
        residual_bounds = np.array([
            residual_decay_bound(lipschitz, bound_rate, distances[0], int(k), horizon, dim) for k in steps
        ])
        measured = trace.residuals[:distances.size]
        residual_holds = measured <= residual_bounds * (1.0 + RELATIVE_SLACK) + CONVERGED_DISTANCE

    return ContractionReport(
        rate=rate,
        ratios=ratio_arr,
        distances=distances,
        geometric_bound_holds=geometric_holds,
        residual_bounds=residual_bounds,
        residual_bound_holds=residual_holds,
    )
