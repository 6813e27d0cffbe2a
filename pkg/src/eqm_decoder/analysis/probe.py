"""
Loop-integral probe for non-conservative (curl) components of a field.
"""
from typing import List, Optional, Tuple

import numpy as np

from ..core import ActionChunk, Condition, chunk_flatten, chunk_unflatten
from ..errors import InvalidArgumentError
from ..solver import FieldEvaluator


def circle_loop(
    center: ActionChunk,
    radius: float,
    points: int,
    plane: Tuple[int, int] = (0, 1),
) -> List[ActionChunk]:
    """
    M points on a circle around a chunk, in the plane of two flat coordinates.

    Points run counter-clockwise from θ = 0 in steps of 2π/M; the loop is
    closed implicitly.
    """
    if points < 3 or not radius > 0:
        raise InvalidArgumentError("a loop needs at least 3 points and a positive radius", argument="points")
    i, j = plane
    size = center.values.size
    if not (0 <= i < size and 0 <= j < size and i != j):
        raise InvalidArgumentError(f"plane {plane} is not a pair of distinct chunk coordinates", argument="plane")
    loop = []
    for theta in 2.0 * np.pi * np.arange(points) / points:
        flat = chunk_flatten(center)
        flat[i] += radius * np.cos(theta)
        flat[j] += radius * np.sin(theta)
        loop.append(chunk_unflatten(flat, center.horizon, center.dim))
    return loop


def conservativity_probe(evaluator: FieldEvaluator, cond: Optional[Condition], loop: List[ActionChunk]) -> float:
    """
    Trapezoidal line integral ∮ f · dA around a closed polygonal loop.

    Zero (to round-off) for gradient fields; a curl component contributes
    its circulation.

    Args:
        evaluator: Field evaluator
        cond: Condition passed to the evaluator
        loop: Loop vertices; the last connects back to the first

    Returns:
        The discrete circulation
    """
    if len(loop) < 3:
        raise InvalidArgumentError("a loop needs at least 3 points", argument="loop")
    values = [np.asarray(evaluator(point, cond), dtype=np.float64) for point in loop]
    total = 0.0
    for m, point in enumerate(loop):
        n = (m + 1) % len(loop)
        segment = loop[n].values - point.values
        total += 0.5 * float(np.sum((values[m] + values[n]) * segment))
    return total
