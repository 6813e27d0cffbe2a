"""
Equilibrium decoding and the flow-baseline sampler.
"""
from .config import SolverConfig, WarmStartMode, WarmStartState
from .evaluators import (
    CountingEvaluator,
    FieldEvaluator,
    TimeFieldEvaluator,
    analytic_evaluator,
    network_evaluator,
    time_network_evaluator,
)
from .flow_sampler import euler_flow_sample
from .nesterov import SolverTrace, StopReason, nesterov_step, solve_equilibrium
from .warm_start import cold_start_init, warm_start_init

__all__ = [
    "CountingEvaluator",
    "FieldEvaluator",
    "SolverConfig",
    "SolverTrace",
    "StopReason",
    "TimeFieldEvaluator",
    "WarmStartMode",
    "WarmStartState",
    "analytic_evaluator",
    "cold_start_init",
    "euler_flow_sample",
    "nesterov_step",
    "network_evaluator",
    "solve_equilibrium",
    "time_network_evaluator",
    "warm_start_init",
]
