"""
Demonstration datasets of (condition, action chunk) pairs.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import InvalidArgumentError

SCALE_FLOOR = 1e-6


@dataclass(frozen=True, eq=False)
class NormalizationStats:
    """Per-dimension action mean and scale; normalized = (raw − mean) / scale."""

    mean: np.ndarray
    scale: np.ndarray

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=np.float64).ravel()
        scale = np.asarray(self.scale, dtype=np.float64).ravel()
        if mean.shape != scale.shape or np.any(scale <= 0) or not np.all(np.isfinite(mean)):
            raise InvalidArgumentError("normalization needs matching finite mean and positive scale", argument="scale")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "scale", scale)

    @classmethod
    def identity(cls, action_dim: int) -> "NormalizationStats":
        return cls(mean=np.zeros(action_dim), scale=np.ones(action_dim))

    @classmethod
    def fit(cls, raw_chunks: np.ndarray) -> "NormalizationStats":
        """Zero mean, unit standard deviation per action dimension over all rows."""
        rows = np.asarray(raw_chunks, dtype=np.float64).reshape(-1, np.shape(raw_chunks)[-1])
        return cls(mean=rows.mean(axis=0), scale=np.maximum(rows.std(axis=0), SCALE_FLOOR))

    @property
    def action_dim(self) -> int:
        return int(self.mean.size)

    def normalize(self, raw: np.ndarray) -> np.ndarray:
        return (np.asarray(raw, dtype=np.float64) - self.mean) / self.scale

    def denormalize(self, normalized: np.ndarray) -> np.ndarray:
        return np.asarray(normalized, dtype=np.float64) * self.scale + self.mean


@dataclass
class DemoBatch:
    """A minibatch of demonstrations as stacked arrays."""

    conds: np.ndarray  # (B, cond_width)
    chunks: np.ndarray  # (B, H, d)

    @property
    def size(self) -> int:
        return int(self.chunks.shape[0])


@dataclass
class Dataset:
    """
    Normalized demonstration chunks with their conditions.

    Chunks are stored normalized; stats map them back to raw action units.
    """

    conds: np.ndarray  # (N, cond_width)
    chunks: np.ndarray  # (N, H, d), normalized
    stats: NormalizationStats
    kind: str = "reach"

    def __post_init__(self) -> None:
        self.conds = np.asarray(self.conds, dtype=np.float64)
        self.chunks = np.asarray(self.chunks, dtype=np.float64)
        if self.chunks.ndim != 3 or self.chunks.shape[0] == 0:
            raise InvalidArgumentError(
                f"dataset needs a non-empty (N, H, d) chunk array, got {self.chunks.shape}",
                argument="chunks",
            )
        if self.conds.ndim != 2 or self.conds.shape[0] != self.chunks.shape[0]:
            raise InvalidArgumentError("conditions and chunks must have the same count", argument="conds")
        if self.stats.action_dim != self.chunks.shape[2]:
            raise InvalidArgumentError("normalization stats do not match the action dim", argument="stats")
        if not (np.all(np.isfinite(self.conds)) and np.all(np.isfinite(self.chunks))):
            raise InvalidArgumentError("dataset contains non-finite values", argument="chunks")

    @property
    def size(self) -> int:
        return int(self.chunks.shape[0])

    @property
    def horizon(self) -> int:
        return int(self.chunks.shape[1])

    @property
    def action_dim(self) -> int:
        return int(self.chunks.shape[2])

    @property
    def cond_width(self) -> int:
        return int(self.conds.shape[1])

    def batch(self, indices: np.ndarray) -> DemoBatch:
        return DemoBatch(conds=self.conds[indices], chunks=self.chunks[indices])

    def subset(self, indices: np.ndarray) -> "Dataset":
        """Rows at the given indices, sharing this dataset's normalization."""
        return Dataset(conds=self.conds[indices], chunks=self.chunks[indices], stats=self.stats, kind=self.kind)


def holdout_split(
    dataset: Dataset,
    episode_ids: np.ndarray,
    fraction: float,
    seed: int,
) -> Tuple[Dataset, Optional[Dataset]]:
    """
    Hold out whole episodes for evaluation.

    ceil(fraction · episodes) episodes, drawn with the seed, go to the held-out
    set; at least one episode always stays in the training set.

    Args:
        dataset: Demonstrations
        episode_ids: Episode label of every row
        fraction: Share of episodes to hold out, in [0, 1)
        seed: Seed of the episode draw

    Returns:
        (training set, held-out set or None when nothing is held out)
    """
    episode_ids = np.asarray(episode_ids)
    if episode_ids.shape != (dataset.size,):
        raise InvalidArgumentError(
            f"need one episode label per row, got {episode_ids.shape} for {dataset.size} rows",
            argument="episode_ids",
        )
    if not 0.0 <= fraction < 1.0:
        raise InvalidArgumentError(f"holdout fraction must lie in [0, 1), got {fraction}", argument="fraction")

    episodes = np.unique(episode_ids)
    n_held = min(int(np.ceil(fraction * episodes.size)), episodes.size - 1)
    if n_held == 0:
        return dataset, None
    held = np.random.default_rng(seed).choice(episodes, size=n_held, replace=False)
    mask = np.isin(episode_ids, held)
    return dataset.subset(np.flatnonzero(~mask)), dataset.subset(np.flatnonzero(mask))
