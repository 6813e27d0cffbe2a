"""
Binary demonstration dataset files.

Layout (little-endian): b"EQMD1", uint32 [kind_code, H, d, cond_width],
uint64 count, float64 mean[d], scale[d], then count records of
cond[cond_width] followed by the normalized chunk [H·d] row-major.
"""
import numpy as np

from ..envs import KIND_CODES
from ..errors import FormatError
from ..logging import get_logger
from ..training import Dataset, NormalizationStats
from .files import ByteReader, PathLike, ensure_writable, read_bytes

logger = get_logger(__name__)

DATASET_MAGIC = b"EQMD1"
_KINDS = {code: kind.value for kind, code in KIND_CODES.items()}


def save_dataset(path: PathLike, dataset: Dataset, force: bool = False) -> None:
    target = ensure_writable(path, force)
    kind_code = {kind.value: code for kind, code in KIND_CODES.items()}[dataset.kind]
    header = np.asarray([kind_code, dataset.horizon, dataset.action_dim, dataset.cond_width], dtype="<u4")
    records = np.concatenate([dataset.conds, dataset.chunks.reshape(dataset.size, -1)], axis=1)
    target.write_bytes(b"".join([
        DATASET_MAGIC,
        header.tobytes(),
        np.asarray([dataset.size], dtype="<u8").tobytes(),
        dataset.stats.mean.astype("<f8").tobytes(),
        dataset.stats.scale.astype("<f8").tobytes(),
        records.astype("<f8").tobytes(),
    ]))
    logger.info("Saved dataset", path=str(target), records=dataset.size, env=dataset.kind)


def load_dataset(path: PathLike) -> Dataset:
    reader = ByteReader(read_bytes(path), path)
    reader.expect_magic(DATASET_MAGIC)
    kind_code, horizon, action_dim, cond_width = (int(v) for v in reader.take("<u4", 4))
    if kind_code not in _KINDS:
        raise FormatError(f"unknown env kind code {kind_code}", path=str(path))
    count = int(reader.take("<u8", 1)[0])
    stats = NormalizationStats(mean=reader.take("<f8", action_dim), scale=reader.take("<f8", action_dim))
    width = cond_width + horizon * action_dim
    records = reader.take("<f8", count * width).reshape(count, width)
    reader.finish()
    return Dataset(
        conds=records[:, :cond_width],
        chunks=records[:, cond_width:].reshape(count, horizon, action_dim),
        stats=stats,
        kind=_KINDS[kind_code],
    )
