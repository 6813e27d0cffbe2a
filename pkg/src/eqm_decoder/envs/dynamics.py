"""
Point-agent dynamics, task progress and condition encoding.
"""
from dataclasses import dataclass, replace

import numpy as np

from ..core import Condition
from ..errors import InvalidArgumentError
from .spec import PRESS_DWELL, TARGET_MARGIN, EnvKind, EnvSpec


@dataclass(frozen=True, eq=False)
class EnvState:
    position: np.ndarray  # (d,)
    targets: np.ndarray  # (n_targets, d)
    progress: int = 0  # targets completed
    dwell: int = 0  # consecutive steps within press precision
    steps: int = 0

    @property
    def success(self) -> bool:
        return self.progress >= self.targets.shape[0]

    @property
    def current_target(self) -> np.ndarray:
        return self.targets[min(self.progress, self.targets.shape[0] - 1)]


def clip_magnitude(action: np.ndarray, limit: float = 1.0) -> np.ndarray:
    norm = float(np.linalg.norm(action))
    if norm > limit:
        return action * (limit / norm)
    return action


def initial_state(spec: EnvSpec, rng: np.random.Generator, clean: bool = False) -> EnvState:
    """
    Draw targets inside the workspace margin and a start position.

    Clean episodes start at the workspace centre, randomized ones uniformly.
    Every target lies more than 2δ from the point the agent reaches it from.
    """
    d = spec.action_dim
    start = rng.uniform(spec.low, spec.high, size=d)
    if clean:
        start = np.full(d, spec.center)
    targets = []
    previous = start
    for _ in range(spec.n_targets):
        while True:
            target = rng.uniform(spec.low + TARGET_MARGIN, spec.high - TARGET_MARGIN, size=d)
            if np.linalg.norm(target - previous) > 2 * spec.tolerance:
                break
        targets.append(target)
        previous = target
    return EnvState(position=start, targets=np.array(targets))


def env_step(state: EnvState, action: np.ndarray, spec: EnvSpec, rng: np.random.Generator) -> EnvState:
    """
    Apply one action: position ← clamp(position + Δ·action + noise).

    Actions are limited to unit magnitude. Reaching the current target within
    δ advances progress; a press needs PRESS_DWELL consecutive steps within δ/2.
    """
    action = np.asarray(action, dtype=np.float64).ravel()
    if action.shape != (spec.action_dim,):
        raise InvalidArgumentError(f"action must have {spec.action_dim} entries", argument="action")
    if state.success:
        return replace(state, steps=state.steps + 1)

    noise = spec.process_noise * rng.standard_normal(spec.action_dim)
    position = np.clip(state.position + spec.step_scale * clip_magnitude(action) + noise, spec.low, spec.high)
    distance = float(np.linalg.norm(position - state.current_target))

    progress, dwell = state.progress, state.dwell
    if spec.kind is EnvKind.PRESS:
        dwell = dwell + 1 if distance <= 0.5 * spec.tolerance else 0
        if dwell >= PRESS_DWELL:
            progress += 1
    elif distance <= spec.tolerance:
        progress += 1
    return EnvState(position=position, targets=state.targets, progress=progress, dwell=dwell, steps=state.steps + 1)


def encode_condition(state: EnvState, spec: EnvSpec) -> Condition:
    """State = position ∥ progress fraction; goal = current target."""
    fraction = state.progress / state.targets.shape[0]
    return Condition(state=np.append(state.position, fraction), goal=state.current_target)
