"""
Nesterov-accelerated equilibrium solver with lookahead-residual stopping.

One iteration k evaluates the field once, at the lookahead point

    Ã_k = A_k + μ(A_k − A_{k−1}),    r_k = ‖f(Ã_k; c)‖ / √(Hd),

stops if r_k ≤ τ or k = K_max, and otherwise updates A_{k+1} = Ã_k − η f(Ã_k; c).
A_{−1} is set to A_0. The chunk returned is Ã_T, the point whose residual
ended the solve, so a solve of T iterations costs T + 1 evaluations.
"""
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from ..core import ActionChunk, Condition, normalized_residual
from ..errors import InvalidArgumentError, NumericError, SolverDivergenceError
from .config import SolverConfig
from .evaluators import FieldEvaluator


class StopReason(str, Enum):
    THRESHOLD = "threshold"
    CAP = "cap"


@dataclass(frozen=True, eq=False)
class SolverTrace:
    """Residuals r_0..r_T of one solve, plus iterates when recorded."""

    residuals: np.ndarray
    stop_reason: StopReason
    iterations: int
    max_iterations: int
    iterates: Optional[List[ActionChunk]] = None  # A_0..A_T
    lookaheads: Optional[List[ActionChunk]] = None  # Ã_0..Ã_T

    @property
    def evaluations(self) -> int:
        return self.iterations + 1

    @property
    def final_residual(self) -> float:
        return float(self.residuals[-1])

    def stopping_index(self, threshold: float) -> int:
        """
        T(τ) for a looser or equal threshold, read off this trace.

        Valid for any τ at least as large as the threshold the trace was
        solved with; the answer equals what a fresh solve at τ would report.
        """
        if threshold < 0:
            raise InvalidArgumentError("threshold must be non-negative", argument="threshold")
        hits = np.flatnonzero(self.residuals <= threshold)
        if hits.size:
            return int(hits[0])
        if self.stop_reason is StopReason.THRESHOLD:
            raise InvalidArgumentError(
                "threshold is tighter than the one this trace was solved with",
                argument="threshold",
            )
        return self.iterations

    def lookahead_at(self, k: int) -> ActionChunk:
        if self.lookaheads is None:
            raise InvalidArgumentError("trace was solved without recording iterates", argument="trace")
        return self.lookaheads[k]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"k": np.arange(self.residuals.size), "residual": self.residuals})


def _lookahead(current: ActionChunk, previous: ActionChunk, momentum: float) -> np.ndarray:
    return current.values + momentum * (current.values - previous.values)


def _evaluate(evaluator: FieldEvaluator, point: np.ndarray, cond: Optional[Condition],
              iteration: int) -> Tuple[ActionChunk, np.ndarray, float]:
    """Evaluate the field at a lookahead point, mapping any non-finite value to divergence."""
    if not np.all(np.isfinite(point)):
        raise SolverDivergenceError("non-finite lookahead iterate", iteration=iteration)
    try:
        lookahead = ActionChunk(point)
        value = np.asarray(evaluator(lookahead, cond), dtype=np.float64)
        residual = normalized_residual(value)
    except SolverDivergenceError:
        raise
    except NumericError as e:
        raise SolverDivergenceError(f"non-finite field value: {e.message}", iteration=iteration) from e
    return lookahead, value, residual


def _descend(lookahead: ActionChunk, value: np.ndarray, step_size: float, iteration: int) -> ActionChunk:
    updated = lookahead.values - step_size * value
    if not np.all(np.isfinite(updated)):
        raise SolverDivergenceError("non-finite iterate", iteration=iteration)
    return ActionChunk(updated)


def nesterov_step(
    current: ActionChunk,
    previous: ActionChunk,
    cfg: SolverConfig,
    evaluator: FieldEvaluator,
    cond: Optional[Condition] = None,
    iteration: int = 0,
) -> Tuple[ActionChunk, float]:
    """
    One accelerated update with exactly one field evaluation.

    Args:
        current: A_k
        previous: A_{k−1}
        cfg: Step size and momentum
        evaluator: Field evaluator
        cond: Condition passed to the evaluator
        iteration: Index k, carried on divergence errors

    Returns:
        (A_{k+1}, lookahead residual r_k)
    """
    if current.shape != previous.shape:
        raise InvalidArgumentError("current and previous iterates differ in shape", argument="previous")
    lookahead, value, residual = _evaluate(
        evaluator, _lookahead(current, previous, cfg.momentum), cond, iteration
    )
    return _descend(lookahead, value, cfg.step_size, iteration), residual


def solve_equilibrium(
    evaluator: FieldEvaluator,
    cond: Optional[Condition],
    init: ActionChunk,
    cfg: SolverConfig,
) -> Tuple[ActionChunk, SolverTrace]:
    """
    Iterate until the lookahead residual drops to the threshold or the cap is hit.

    Args:
        evaluator: Field evaluator f(·; c)
        cond: Condition passed to the evaluator
        init: A_0
        cfg: Solver settings; τ = 0 runs to the cap unless a residual is exactly 0

    Returns:
        (Ã_T, trace)
    """
    previous = current = init
    residuals: List[float] = []
    iterates: List[ActionChunk] = []
    lookaheads: List[ActionChunk] = []

    k = 0
    while True:
        lookahead, value, residual = _evaluate(
            evaluator, _lookahead(current, previous, cfg.momentum), cond, k
        )
        residuals.append(residual)
        if cfg.record_iterates:
            iterates.append(current)
            lookaheads.append(lookahead)

        if residual <= cfg.threshold:
            reason = StopReason.THRESHOLD
            break
        if k == cfg.max_iterations:
            reason = StopReason.CAP
            break

        previous, current = current, _descend(lookahead, value, cfg.step_size, k)
        k += 1

    trace = SolverTrace(
        residuals=np.array(residuals),
        stop_reason=reason,
        iterations=k,
        max_iterations=cfg.max_iterations,
        iterates=iterates if cfg.record_iterates else None,
        lookaheads=lookaheads if cfg.record_iterates else None,
    )
    return lookahead, trace
