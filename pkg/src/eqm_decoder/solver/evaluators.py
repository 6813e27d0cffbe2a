"""
Field evaluators: uniform callables over trained networks and analytic fields.
"""
from typing import Any, Callable, Optional

import numpy as np

from ..core import ActionChunk, Condition
from ..errors import InvalidArgumentError
from ..field import AnalyticField, FieldParams, analytic_eval, field_forward

FieldEvaluator = Callable[[ActionChunk, Optional[Condition]], np.ndarray]
TimeFieldEvaluator = Callable[[ActionChunk, Optional[Condition], float], np.ndarray]


def network_evaluator(params: FieldParams) -> FieldEvaluator:
    """f(A; c) of a time-free network."""
    def evaluate(chunk: ActionChunk, cond: Optional[Condition]) -> np.ndarray:
        if cond is None:
            raise InvalidArgumentError("network fields need a condition", argument="cond")
        return field_forward(params, chunk, cond)

    return evaluate


def time_network_evaluator(params: FieldParams) -> TimeFieldEvaluator:
    """f(A; c, γ) of a time-conditioned network."""
    def evaluate(chunk: ActionChunk, cond: Optional[Condition], time: float) -> np.ndarray:
        if cond is None:
            raise InvalidArgumentError("network fields need a condition", argument="cond")
        return field_forward(params, chunk, cond, time)

    return evaluate


def analytic_evaluator(field: AnalyticField) -> FieldEvaluator:
    """Closed-form field; the condition is ignored."""
    def evaluate(chunk: ActionChunk, cond: Optional[Condition]) -> np.ndarray:
        return analytic_eval(field, chunk)

    return evaluate


class CountingEvaluator:
    """Wraps any evaluator and counts its calls."""

    def __init__(self, evaluator: Callable[..., np.ndarray]):
        self.evaluator = evaluator
        self.calls = 0

    def __call__(self, *args: Any) -> np.ndarray:
        self.calls += 1
        return self.evaluator(*args)

    def reset(self) -> int:
        """Zero the counter, returning the previous count."""
        calls, self.calls = self.calls, 0
        return calls
