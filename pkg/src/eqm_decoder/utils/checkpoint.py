"""
Binary checkpoints of field parameters.

Layout (little-endian): b"EQMF1", uint32 [H, d, cond_width, n_hidden,
hidden_1..hidden_n, activation_code, time_conditioned], float64 parameters
(per layer W row-major then b, input layer first), uint32 has_normalization,
then float64 mean[d] and scale[d] when present.
"""
from typing import Optional, Tuple

import numpy as np

from ..errors import FormatError
from ..field import ACTIVATION_CODES, FieldConfig, FieldParams
from ..logging import get_logger
from ..training import NormalizationStats
from .files import ByteReader, PathLike, ensure_writable, read_bytes

logger = get_logger(__name__)

CHECKPOINT_MAGIC = b"EQMF1"
_ACTIVATIONS = {code: name for name, code in ACTIVATION_CODES.items()}


def save_checkpoint(
    path: PathLike,
    params: FieldParams,
    stats: Optional[NormalizationStats] = None,
    force: bool = False,
) -> None:
    """
    Write field parameters and optional action normalization.

    Args:
        path: Output file
        params: Field parameters
        stats: Normalization of the training data
        force: Overwrite an existing file
    """
    target = ensure_writable(path, force)
    cfg = params.config
    header = [cfg.horizon, cfg.action_dim, cfg.cond_width, len(cfg.hidden_widths), *cfg.hidden_widths,
              cfg.activation_code, int(cfg.time_conditioned)]
    parts = [
        CHECKPOINT_MAGIC,
        np.asarray(header, dtype="<u4").tobytes(),
        params.to_vector().astype("<f8").tobytes(),
        np.asarray([0 if stats is None else 1], dtype="<u4").tobytes(),
    ]
    if stats is not None:
        parts.append(stats.mean.astype("<f8").tobytes())
        parts.append(stats.scale.astype("<f8").tobytes())
    target.write_bytes(b"".join(parts))
    logger.info("Saved checkpoint", path=str(target), parameter_count=params.parameter_count)


def load_checkpoint(path: PathLike) -> Tuple[FieldParams, Optional[NormalizationStats]]:
    """
    Read a checkpoint written by save_checkpoint.

    Returns:
        (parameters, normalization or None)
    """
    reader = ByteReader(read_bytes(path), path)
    reader.expect_magic(CHECKPOINT_MAGIC)
    horizon, action_dim, cond_width, n_hidden = (int(v) for v in reader.take("<u4", 4))
    widths = tuple(int(v) for v in reader.take("<u4", n_hidden))
    activation_code, time_conditioned = (int(v) for v in reader.take("<u4", 2))
    if activation_code not in _ACTIVATIONS or time_conditioned not in (0, 1):
        raise FormatError("invalid checkpoint header", path=str(path))

    cfg = FieldConfig(
        horizon=horizon,
        action_dim=action_dim,
        cond_width=cond_width,
        hidden_widths=widths,
        activation=_ACTIVATIONS[activation_code],
        time_conditioned=bool(time_conditioned),
    )
    count = sum(fan_in * fan_out + fan_out for fan_in, fan_out in cfg.layer_shapes())
    params = FieldParams.from_vector(cfg, reader.take("<f8", count))

    stats = None
    has_stats = int(reader.take("<u4", 1)[0])
    if has_stats == 1:
        stats = NormalizationStats(mean=reader.take("<f8", action_dim), scale=reader.take("<f8", action_dim))
    elif has_stats != 0:
        raise FormatError("invalid normalization flag", path=str(path))
    reader.finish()
    return params, stats
