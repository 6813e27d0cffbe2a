"""
Decoder policies mapping a condition to an executable action chunk.

Every policy returns the chunk in raw action units together with the
normalized chunk a warm start continues from and its compute accounting.
"""
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Sequence

import numpy as np

from ..core import ActionChunk, Condition
from ..field import FieldParams
from ..solver import (
    CountingEvaluator,
    SolverConfig,
    WarmStartMode,
    WarmStartState,
    cold_start_init,
    euler_flow_sample,
    network_evaluator,
    solve_equilibrium,
    time_network_evaluator,
    warm_start_init,
)
from ..training import NormalizationStats
from .expert import expert_chunk
from .spec import EnvSpec


@dataclass(frozen=True)
class Budget:
    """Per-cycle compute: iteration cap (Euler steps for flow) and residual threshold."""

    max_iterations: int
    threshold: float = 0.0


@dataclass
class DecodeResult:
    chunk: ActionChunk  # raw units, executed
    normalized: ActionChunk  # decoder space, carried into warm starts
    iterations: int
    evaluations: int
    stop_reason: str
    threshold_iterations: Dict[float, int] = field(default_factory=dict)


class EqmPolicy:
    """
    Nesterov equilibrium decoding of a time-free field.

    With scan_thresholds set, each cycle is solved once to the tightest
    threshold with lookaheads recorded; the executed chunk is the one
    certified at the policy's own threshold and T(τ) is reported for every
    scanned τ.
    """

    name = "eqm"

    def __init__(
        self,
        params: FieldParams,
        stats: NormalizationStats,
        solver_config: SolverConfig,
        warm_mode: WarmStartMode = WarmStartMode.SHIFTED,
        scan_thresholds: Sequence[float] = (),
    ):
        self.params = params
        self.stats = stats
        self.solver_config = solver_config
        self.warm_mode = WarmStartMode(warm_mode)
        self.scan_thresholds = tuple(sorted(scan_thresholds))
        self.evaluator = CountingEvaluator(network_evaluator(params))

    def decode(
        self,
        cond: Condition,
        rng: np.random.Generator,
        budget: Optional[Budget] = None,
        warm_state: Optional[WarmStartState] = None,
    ) -> DecodeResult:
        cfg = self.solver_config
        if budget is not None:
            cfg = replace(cfg, max_iterations=budget.max_iterations, threshold=budget.threshold)
        horizon, dim = self.params.config.horizon, self.params.config.action_dim
        if warm_state is None:
            init = cold_start_init(horizon, dim, rng)
        else:
            init = warm_start_init(warm_state, rng, self.warm_mode)

        self.evaluator.reset()
        if not self.scan_thresholds:
            normalized, trace = solve_equilibrium(self.evaluator, cond, init, cfg)
            return self._result(normalized, trace.iterations, self.evaluator.calls, trace.stop_reason.value)

        tightest = min(self.scan_thresholds[0], cfg.threshold)
        _, trace = solve_equilibrium(
            self.evaluator, cond, init, replace(cfg, threshold=tightest, record_iterates=True)
        )
        own = trace.stopping_index(cfg.threshold)
        reason = "threshold" if trace.residuals[own] <= cfg.threshold else "cap"
        result = self._result(trace.lookahead_at(own), own, own + 1, reason)
        result.threshold_iterations = {tau: trace.stopping_index(tau) for tau in self.scan_thresholds}
        return result

    def _result(self, normalized: ActionChunk, iterations: int, evaluations: int, reason: str) -> DecodeResult:
        return DecodeResult(
            chunk=ActionChunk(self.stats.denormalize(normalized.values)),
            normalized=normalized,
            iterations=iterations,
            evaluations=evaluations,
            stop_reason=reason,
        )


class FlowPolicy:
    """K-step Euler integration of a time-conditioned field; warm starts are ignored."""

    name = "flow"

    def __init__(self, params: FieldParams, stats: NormalizationStats, steps: int):
        self.params = params
        self.stats = stats
        self.steps = steps
        self.evaluator = CountingEvaluator(time_network_evaluator(params))

    def decode(
        self,
        cond: Condition,
        rng: np.random.Generator,
        budget: Optional[Budget] = None,
        warm_state: Optional[WarmStartState] = None,
    ) -> DecodeResult:
        steps = self.steps if budget is None else budget.max_iterations
        self.evaluator.reset()
        normalized = euler_flow_sample(
            self.evaluator, cond, steps, rng, self.params.config.horizon, self.params.config.action_dim
        )
        return DecodeResult(
            chunk=ActionChunk(self.stats.denormalize(normalized.values)),
            normalized=normalized,
            iterations=steps,
            evaluations=self.evaluator.calls,
            stop_reason="fixed",
        )


class ExpertPolicy:
    """The scripted expert read back from the condition; uses no field evaluations."""

    name = "expert"

    def __init__(self, spec: EnvSpec):
        self.spec = spec

    def decode(
        self,
        cond: Condition,
        rng: np.random.Generator,
        budget: Optional[Budget] = None,
        warm_state: Optional[WarmStartState] = None,
    ) -> DecodeResult:
        d = self.spec.action_dim
        chunk = expert_chunk(cond.state[:d], cond.goal, self.spec)
        return DecodeResult(chunk=chunk, normalized=chunk, iterations=0, evaluations=0, stop_reason="expert")
