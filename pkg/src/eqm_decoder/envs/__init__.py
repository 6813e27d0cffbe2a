"""
Toy point-agent tasks, the scripted expert and the closed-loop harness.
"""
from .closed_loop import EpisodeResult, Policy, episode_streams, run_closed_loop, run_episode, summarize
from .dynamics import EnvState, clip_magnitude, encode_condition, env_step, initial_state
from .expert import episode_ids, expert_chunk, generate_dataset, scripted_expert
from .policies import Budget, DecodeResult, EqmPolicy, ExpertPolicy, FlowPolicy
from .spec import KIND_CODES, EnvKind, EnvSpec

__all__ = [
    "Budget",
    "DecodeResult",
    "EnvKind",
    "EnvSpec",
    "EnvState",
    "EpisodeResult",
    "EqmPolicy",
    "ExpertPolicy",
    "FlowPolicy",
    "KIND_CODES",
    "Policy",
    "clip_magnitude",
    "encode_condition",
    "env_step",
    "episode_ids",
    "episode_streams",
    "expert_chunk",
    "generate_dataset",
    "initial_state",
    "run_closed_loop",
    "run_episode",
    "scripted_expert",
    "summarize",
]
