"""
Solver initializations: fresh noise, or half of the previous output plus noise.
"""
import numpy as np

from ..core import ActionChunk
from ..errors import ConfigurationError
from .config import WarmStartMode, WarmStartState


def cold_start_init(horizon: int, dim: int, rng: np.random.Generator) -> ActionChunk:
    """I.i.d. standard-normal H×d chunk."""
    return ActionChunk(rng.standard_normal((horizon, dim)))


def warm_start_init(
    ws: WarmStartState,
    rng: np.random.Generator,
    mode: WarmStartMode = WarmStartMode.SHIFTED,
) -> ActionChunk:
    """
    First half from the previous output chunk, second half fresh noise.

    In shifted mode the copied rows are e .. e+H/2−1, which line up in time
    with the new chunk after e actions were executed. Leading mode copies
    rows 0 .. H/2−1.

    Args:
        ws: Previous output and executed-step count e
        rng: Source of the noise tail
        mode: Which half-length segment to copy

    Returns:
        The H×d initial chunk
    """
    horizon, dim = ws.previous.shape
    if horizon % 2:
        raise ConfigurationError(f"warm starts need an even horizon, got {horizon}", config_key="envs.horizon")
    half = horizon // 2
    mode = WarmStartMode(mode)
    offset = ws.executed if mode is WarmStartMode.SHIFTED else 0
    if offset + half > horizon:
        raise ConfigurationError(
            f"executing {ws.executed} steps leaves fewer than {half} rows to copy",
            config_key="envs.executed_steps",
        )
    head = ws.previous.values[offset:offset + half]
    tail = rng.standard_normal((horizon - half, dim))
    return ActionChunk(np.vstack([head, tail]))
