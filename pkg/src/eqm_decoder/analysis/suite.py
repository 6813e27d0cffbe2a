"""
Local convergence verification suite on analytic fields.

Each check is evaluated against a closed-form oracle. Checks run outside the
step-size hypothesis are reported as informational and never fail the suite.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from ..core import ActionChunk, Condition
from ..errors import safe_execute
from ..field import AnalyticField, AnalyticKind
from ..logging import get_logger
from ..solver import (
    FieldEvaluator,
    SolverConfig,
    analytic_evaluator,
    solve_equilibrium,
)
from .bounds import sufficient_iterations, warm_start_saving
from .contraction import estimate_contraction
from .descent import DescentReport, check_descent
from .probe import circle_loop, conservativity_probe

logger = get_logger(__name__)


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INFO = "info"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: CheckStatus
    measured: float
    expected: float
    detail: str = ""


def _status(ok: bool) -> CheckStatus:
    return CheckStatus.PASS if ok else CheckStatus.FAIL


def _scalar_chunk(value: float) -> ActionChunk:
    return ActionChunk(np.array([[value]]))


def _linear_field(horizon: int = 1, dim: int = 1) -> AnalyticField:
    return AnalyticField(AnalyticKind.LINEAR_CONTRACTION, ActionChunk(np.zeros((horizon, dim))), stiffness=1.0)


def check_tight_descent() -> Tuple[CheckResult, DescentReport]:
    """E = ½A², η = L = 1, E_0 = 1, K = 1: the bound is met with equality."""
    field = AnalyticField(AnalyticKind.QUADRATIC_ENERGY_GRADIENT, _scalar_chunk(0.0))
    report = check_descent(field, SolverConfig(step_size=1.0, momentum=0.0), _scalar_chunk(math.sqrt(2.0)), 1)
    measured = float(report.min_squared_residuals[0])
    bound = float(report.bounds[0])
    ok = not report.violated and math.isclose(bound, 2.0, rel_tol=1e-12) and math.isclose(measured, 2.0, rel_tol=1e-12)
    return CheckResult("descent_bound_tight_case", _status(ok), measured, bound, "E0=1 K=1 eta=1"), report


def check_random_descent(rng: np.random.Generator, inits: int = 5, iterations: int = 50,
                         horizon: int = 4, dim: int = 2) -> Tuple[CheckResult, DescentReport]:
    """Anisotropic quadratic energy, η = 1/L, random inits: monotone energy and the residual bound."""
    field = AnalyticField(
        AnalyticKind.QUADRATIC_ENERGY_GRADIENT,
        ActionChunk(rng.standard_normal((horizon, dim))),
        stiffness=2.0,
        scales=rng.uniform(0.1, 1.0, size=(horizon, dim)),
    )
    cfg = SolverConfig(step_size=1.0 / field.lipschitz, momentum=0.0)
    reports = [
        check_descent(field, cfg, ActionChunk(rng.standard_normal((horizon, dim)) * 3.0), iterations)
        for _ in range(inits)
    ]
    violated = sum(r.violated for r in reports)
    worst = max(float(np.max(r.min_squared_residuals / np.maximum(r.bounds, 1e-300))) for r in reports)
    result = CheckResult(
        "descent_monotone_energy_and_bound",
        _status(violated == 0),
        worst,
        1.0,
        f"{inits} inits K={iterations}; measured is the largest min-residual²/bound ratio",
    )
    return result, reports[0]


def check_out_of_hypothesis(rng: np.random.Generator) -> CheckResult:
    """η = 2.5/L lies outside the step-size hypothesis; reported only."""
    field = AnalyticField(AnalyticKind.QUADRATIC_ENERGY_GRADIENT, ActionChunk(np.zeros((2, 2))))
    cfg = SolverConfig(step_size=2.5 / field.lipschitz, momentum=0.0)
    report = check_descent(field, cfg, ActionChunk(rng.standard_normal((2, 2))), 10)
    return CheckResult(
        "descent_step_above_inverse_lipschitz",
        CheckStatus.INFO,
        float(report.violated),
        0.0,
        f"outside hypothesis (eta*L={cfg.step_size * field.lipschitz:g}); violated={report.violated}",
    )


def check_contraction() -> List[CheckResult]:
    """κ = 1, η = 0.5, μ = 0: ρ̂ ≈ 0.5 and the residual decay bound with exact L and ρ."""
    field = _linear_field()
    cfg = SolverConfig(step_size=0.5, momentum=0.0, threshold=1e-12, max_iterations=30, record_iterates=True)
    _, trace = solve_equilibrium(analytic_evaluator(field), None, _scalar_chunk(1.0), cfg)
    estimated = estimate_contraction(trace, field.equilibrium)
    exact = estimate_contraction(trace, field.equilibrium, lipschitz=1.0, rho=0.5)
    return [
        CheckResult("contraction_rate", _status(0.499 <= estimated.rate <= 0.501), estimated.rate, 0.5,
                    "kappa=1 eta=0.5 mu=0"),
        CheckResult("residual_decay_bound", _status(exact.satisfied),
                    float(np.mean(exact.residual_bound_holds)), 1.0, "fraction of steps within the bound"),
    ]


def check_sufficient_iterations() -> List[CheckResult]:
    """Formula 4 for (L=1, dist0=1, τ=0.1, Hd=1, ρ=0.5), and 0 when already met."""
    field = _linear_field()
    evaluator = analytic_evaluator(field)
    predicted = sufficient_iterations(1.0, 1.0, 0.1, 1, 1, 0.5)
    _, trace = solve_equilibrium(evaluator, None, _scalar_chunk(1.0),
                                 SolverConfig(step_size=0.5, momentum=0.0, threshold=0.1))
    met = sufficient_iterations(1.0, 0.05, 0.1, 1, 1, 0.5)
    _, met_trace = solve_equilibrium(evaluator, None, _scalar_chunk(0.05),
                                     SolverConfig(step_size=0.5, momentum=0.0, threshold=0.1))
    return [
        CheckResult("sufficient_iterations", _status(predicted == 4 and trace.iterations <= predicted),
                    float(trace.iterations), float(predicted), "solver iterations vs formula"),
        CheckResult("sufficient_iterations_met_at_init", _status(met == 0 and met_trace.iterations == 0),
                    float(met_trace.iterations), float(met), "L*dist0 <= tau*sqrt(Hd)"),
    ]


def check_warm_start_saving(alpha: float = 0.5) -> CheckResult:
    """Shrinking dist0 by α saves log(1/α)/log(1/ρ) iterations, up to the ceiling effect."""
    field = _linear_field()
    evaluator = analytic_evaluator(field)
    cfg = SolverConfig(step_size=0.5, momentum=0.0, threshold=1e-3)
    _, cold = solve_equilibrium(evaluator, None, _scalar_chunk(1.0), cfg)
    _, warm = solve_equilibrium(evaluator, None, _scalar_chunk(alpha), cfg)
    saving = warm_start_saving(alpha, 0.5)
    gap = cold.iterations - warm.iterations
    return CheckResult("warm_start_saving", _status(abs(gap - saving) <= 1.0), float(gap), saving,
                       f"alpha={alpha} rho=0.5")


def check_conservativity(points: int = 360) -> List[CheckResult]:
    """Loop integrals: zero for a gradient field, 2ωS for the rotation field on the unit circle."""
    center = ActionChunk(np.zeros((1, 2)))
    loop = circle_loop(center, 1.0, points)
    quadratic = AnalyticField(AnalyticKind.QUADRATIC_ENERGY_GRADIENT, center, stiffness=1.5)
    rotation = AnalyticField(AnalyticKind.ROTATION, center, stiffness=1.0, rotation=1.0)
    gradient_integral = conservativity_probe(analytic_evaluator(quadratic), None, loop)
    circulation = conservativity_probe(analytic_evaluator(rotation), None, loop)
    expected = 2.0 * rotation.rotation * math.pi
    return [
        CheckResult("loop_integral_gradient_field", _status(abs(gradient_integral) <= 1e-6),
                    gradient_integral, 0.0, f"M={points}"),
        CheckResult("loop_integral_rotation_field", _status(abs(circulation - expected) <= 0.01 * expected),
                    circulation, expected, f"M={points} omega=1 unit circle"),
    ]


def probe_learned_field(evaluator: FieldEvaluator, cond: Condition, center: ActionChunk,
                        radius: float = 0.5, points: int = 360) -> CheckResult:
    """Circulation of a learned field around a data chunk; a measurement with no pass/fail."""
    value = conservativity_probe(evaluator, cond, circle_loop(center, radius, points))
    return CheckResult("loop_integral_learned_field", CheckStatus.INFO, value, float("nan"),
                       f"radius={radius} M={points}")


def run_verification_suite(
    seed: int = 0,
    learned: Optional[Tuple[FieldEvaluator, Condition, ActionChunk]] = None,
) -> Tuple[List[CheckResult], DescentReport]:
    """
    Run every check.

    Args:
        seed: Seed for random inits and energies
        learned: Optional (evaluator, condition, data chunk) for the learned-field probe;
            a probe that raises is logged and left out of the results

    Returns:
        (check results, descent report of the first random init for the step CSV)
    """
    rng = np.random.default_rng(seed)
    tight, _ = check_tight_descent()
    descent, descent_report = check_random_descent(rng)
    results = [tight, descent, check_out_of_hypothesis(rng)]
    results += check_contraction()
    results += check_sufficient_iterations()
    results.append(check_warm_start_saving())
    results += check_conservativity()
    if learned is not None:
        probe = safe_execute(probe_learned_field, *learned)
        if probe is not None:
            results.append(probe)

    for result in results:
        logger.info("Verification check", check=result.name, status=result.status.value,
                    measured=result.measured, expected=result.expected)
    return results, descent_report


def failed_checks(results: List[CheckResult]) -> List[str]:
    return [r.name for r in results if r.status is CheckStatus.FAIL]


def results_frame(results: List[CheckResult]) -> pd.DataFrame:
    return pd.DataFrame({
        "check": [r.name for r in results],
        "status": [r.status.value for r in results],
        "measured": [r.measured for r in results],
        "expected": [r.expected for r in results],
        "detail": [r.detail for r in results],
    })
