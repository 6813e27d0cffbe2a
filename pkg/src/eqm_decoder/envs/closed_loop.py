"""
Receding-horizon closed-loop evaluation of decoder policies.

Each episode seed is split into independent environment, decoder and shadow
streams, so runs that differ only in the decoder see identical environments.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Protocol, Sequence, Tuple

import numpy as np

from ..core import Condition
from ..errors import SolverDivergenceError
from ..logging import get_logger
from ..solver import WarmStartState
from .dynamics import encode_condition, env_step, initial_state
from .policies import Budget, DecodeResult
from .spec import EnvSpec

logger = get_logger(__name__)


class Policy(Protocol):
    name: str

    def decode(
        self,
        cond: Condition,
        rng: np.random.Generator,
        budget: Optional[Budget] = None,
        warm_state: Optional[WarmStartState] = None,
    ) -> DecodeResult:
        ...


@dataclass
class EpisodeResult:
    seed: int
    success: bool
    cycles: int
    evaluations: int
    iterations: List[int] = field(default_factory=list)
    cycle_evaluations: List[int] = field(default_factory=list)
    threshold_iterations: List[Dict[float, int]] = field(default_factory=list)
    paired_iterations: List[Tuple[int, int]] = field(default_factory=list)  # (warm, cold)
    diverged: bool = False


def episode_streams(seed: int) -> Tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    """(environment, decoder, shadow) generators spawned from one seed."""
    env_seq, decoder_seq, shadow_seq = np.random.SeedSequence(seed).spawn(3)
    return (
        np.random.default_rng(env_seq),
        np.random.default_rng(decoder_seq),
        np.random.default_rng(shadow_seq),
    )


def run_episode(
    policy: Policy,
    spec: EnvSpec,
    seed: int,
    budget: Optional[Budget] = None,
    warm_start: bool = False,
    shadow_cold: bool = False,
) -> EpisodeResult:
    """
    Decode, execute the first e actions, and replan until success or the cycle cap.

    Args:
        policy: Decoder policy
        spec: Task definition
        seed: Episode seed
        budget: Per-cycle compute override
        warm_start: Initialize each solve from the previous output
        shadow_cold: With warm_start, also run an unexecuted cold solve on the
            same condition and record (warm, cold) iteration pairs

    Returns:
        The episode outcome; a solver divergence ends the episode as a failure
    """
    env_rng, decoder_rng, shadow_rng = episode_streams(seed)
    state = initial_state(spec, env_rng)
    result = EpisodeResult(seed=seed, success=False, cycles=0, evaluations=0)
    warm_state: Optional[WarmStartState] = None

    while result.cycles < spec.max_cycles and not state.success:
        cond = encode_condition(state, spec)
        try:
            decoded = policy.decode(cond, decoder_rng, budget, warm_state if warm_start else None)
            if shadow_cold and warm_state is not None:
                shadow = policy.decode(cond, shadow_rng, budget, None)
                result.paired_iterations.append((decoded.iterations, shadow.iterations))
        except SolverDivergenceError as e:
            logger.warning("Decoder diverged", seed=seed, cycle=result.cycles, iteration=e.iteration)
            result.diverged = True
            break

        result.cycles += 1
        result.evaluations += decoded.evaluations
        result.iterations.append(decoded.iterations)
        result.cycle_evaluations.append(decoded.evaluations)
        if decoded.threshold_iterations:
            result.threshold_iterations.append(decoded.threshold_iterations)

        for action in decoded.chunk.values[:spec.executed_steps]:
            state = env_step(state, action, spec, env_rng)
            if state.success:
                break
        warm_state = WarmStartState(previous=decoded.normalized, executed=spec.executed_steps)

    result.success = state.success
    return result


def run_closed_loop(
    policy: Policy,
    spec: EnvSpec,
    seeds: Sequence[int],
    budget: Optional[Budget] = None,
    warm_start: bool = False,
    shadow_cold: bool = False,
) -> List[EpisodeResult]:
    """Run one episode per seed, in seed order."""
    results = [run_episode(policy, spec, seed, budget, warm_start, shadow_cold) for seed in seeds]
    summary = summarize(results)
    logger.info(
        "Closed-loop evaluation finished",
        env=spec.kind.value,
        decoder=policy.name,
        episodes=len(results),
        warm_start=warm_start,
        success_rate=summary["success_rate"],
        mean_evals=summary["mean_evals"],
    )
    return results


def summarize(results: Sequence[EpisodeResult]) -> Dict[str, float]:
    """Success rate, evaluations per control cycle, and iteration statistics pooled over cycles."""
    if not results:
        return {"success_rate": 0.0, "mean_evals": 0.0, "mean_iterations": 0.0, "median_iterations": 0.0}
    cycles = sum(r.cycles for r in results)
    iterations = np.array([i for r in results for i in r.iterations], dtype=np.float64)
    return {
        "success_rate": float(np.mean([r.success for r in results])),
        "mean_evals": sum(r.evaluations for r in results) / cycles if cycles else 0.0,
        "mean_iterations": float(iterations.mean()) if iterations.size else 0.0,
        "median_iterations": float(np.median(iterations)) if iterations.size else 0.0,
    }
