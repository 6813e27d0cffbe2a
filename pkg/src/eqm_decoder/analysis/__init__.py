"""
Numerical verification of the solver's local convergence guarantees.
"""
from .bounds import (
    residual_decay_bound,
    sufficient_iterations,
    sufficient_iterations_real,
    warm_start_saving,
)
from .contraction import ContractionReport, estimate_contraction
from .descent import DescentReport, check_descent
from .probe import circle_loop, conservativity_probe
from .suite import (
    CheckResult,
    CheckStatus,
    failed_checks,
    probe_learned_field,
    results_frame,
    run_verification_suite,
)

__all__ = [
    "CheckResult",
    "CheckStatus",
    "ContractionReport",
    "DescentReport",
    "check_descent",
    "circle_loop",
    "conservativity_probe",
    "estimate_contraction",
    "failed_checks",
    "probe_learned_field",
    "residual_decay_bound",
    "results_frame",
    "run_verification_suite",
    "sufficient_iterations",
    "sufficient_iterations_real",
    "warm_start_saving",
]
