"""
Command-line harness: data generation, training and the closed-loop experiments.
"""
from .commands import COMMANDS, episode_seeds, pair_statistics
from .main import build_parser, main, parse_args
from .run_config import RunConfig, command_keys

__all__ = [
    "COMMANDS",
    "RunConfig",
    "build_parser",
    "command_keys",
    "episode_seeds",
    "main",
    "pair_statistics",
    "parse_args",
]
