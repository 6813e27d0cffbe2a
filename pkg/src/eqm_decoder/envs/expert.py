"""
Scripted proportional-control expert and demonstration generation.
"""
import numpy as np

from ..core import ActionChunk
from ..errors import InvalidArgumentError
from ..logging import get_logger
from ..training import Dataset, NormalizationStats
from .dynamics import EnvState, clip_magnitude, encode_condition, env_step, initial_state
from .spec import EnvSpec

logger = get_logger(__name__)


def expert_chunk(position: np.ndarray, target: np.ndarray, spec: EnvSpec) -> ActionChunk:
    """
    H actions from a noise-free virtual rollout of a = clip(gain·(target − p), 1).
    """
    actions = np.empty((spec.horizon, spec.action_dim))
    p = np.asarray(position, dtype=np.float64).copy()
    target = np.asarray(target, dtype=np.float64)
    for h in range(spec.horizon):
        a = clip_magnitude(spec.expert_gain * (target - p))
        actions[h] = a
        p = np.clip(p + spec.step_scale * a, spec.low, spec.high)
    return ActionChunk(actions)


def scripted_expert(state: EnvState, spec: EnvSpec) -> ActionChunk:
    """Expert chunk toward the current target, in raw action units."""
    return expert_chunk(state.position, state.current_target, spec)


def generate_dataset(spec: EnvSpec, n_episodes: int, rng: np.random.Generator, clean_fraction: float = 0.2) -> Dataset:
    """
    Roll the expert and record (condition, chunk) at every control cycle.

    The first round(clean_fraction·n) episodes start at the workspace centre;
    the rest start uniformly at random. Chunks are normalized per action
    dimension with statistics stored on the dataset.

    Args:
        spec: Task definition
        n_episodes: Number of expert episodes, at least 1
        rng: Source of every random draw
        clean_fraction: Share of clean episodes

    Returns:
        The normalized dataset
    """
    if n_episodes < 1:
        raise InvalidArgumentError("dataset needs at least one episode", argument="n_episodes")
    if not 0.0 <= clean_fraction <= 1.0:
        raise InvalidArgumentError("clean fraction must lie in [0, 1]", argument="clean_fraction")

    n_clean = int(round(clean_fraction * n_episodes))
    conds, chunks = [], []
    successes = 0
    for episode in range(n_episodes):
        state = initial_state(spec, rng, clean=episode < n_clean)
        for _ in range(spec.max_cycles):
            chunk = scripted_expert(state, spec)
            conds.append(encode_condition(state, spec).vector)
            chunks.append(chunk.values)
            for action in chunk.values[:spec.executed_steps]:
                state = env_step(state, action, spec, rng)
            if state.success:
                successes += 1
                break

    raw = np.array(chunks)
    stats = NormalizationStats.fit(raw)
    logger.info(
        "Generated demonstrations",
        env=spec.kind.value,
        episodes=n_episodes,
        clean_episodes=n_clean,
        records=len(chunks),
        expert_success=successes / n_episodes,
    )
    return Dataset(conds=np.array(conds), chunks=stats.normalize(raw), stats=stats, kind=spec.kind.value)


def episode_ids(dataset: Dataset) -> np.ndarray:
    """
    Recover the episode of every row of a generated dataset.

    Rows are stored in rollout order. Within an episode the progress fraction
    never decreases and the goal changes only when progress advances, so a new
    episode starts wherever progress drops or the goal changes at equal progress.

    Returns:
        (N,) episode labels counting from 0
    """
    d = dataset.action_dim
    if dataset.cond_width != 2 * d + 1:
        raise InvalidArgumentError(
            f"condition width {dataset.cond_width} is not position, progress and goal for d={d}",
            argument="dataset",
        )
    progress = dataset.conds[:, d]
    goals = dataset.conds[:, d + 1:]
    dropped = progress[1:] < progress[:-1]
    moved = (progress[1:] == progress[:-1]) & np.any(goals[1:] != goals[:-1], axis=1)
    return np.concatenate([[0], np.cumsum(dropped | moved)])
