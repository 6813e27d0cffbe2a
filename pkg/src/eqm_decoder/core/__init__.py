"""
Core numerical vocabulary shared by every other module.
"""
from .types import (
    ActionChunk,
    Condition,
    Interpolant,
    chunk_flatten,
    chunk_unflatten,
    interpolate_batch,
    make_interpolant,
    normalized_residual,
)

__all__ = [
    "ActionChunk",
    "Condition",
    "Interpolant",
    "chunk_flatten",
    "chunk_unflatten",
    "interpolate_batch",
    "make_interpolant",
    "normalized_residual",
]
