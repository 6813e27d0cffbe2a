"""
Closed-form convergence bounds for the equilibrium solver near a contractive root.
"""
import math

from ..errors import InvalidArgumentError

# Guards ceil() against round-off just above an integer
CEIL_SLACK = 1e-12


def _check_rate(rho: float) -> None:
    if not 0.0 < rho < 1.0:
        raise InvalidArgumentError(f"contraction factor must lie in (0, 1), got {rho}", argument="rho")


def residual_decay_bound(lipschitz: float, rho: float, dist0: float, k: int, horizon: int, dim: int) -> float:
    """
    Upper bound (L/√(Hd))·ρ^k·‖A_0 − A*‖ on the k-th normalized residual.

    Args:
        lipschitz: Smoothness constant L of the field
        rho: Contraction factor ρ ≥ 0
        dist0: Initial distance to the equilibrium
        k: Iteration index
        horizon: H
        dim: d

    Returns:
        The bound value
    """
    if lipschitz < 0 or rho < 0 or dist0 < 0 or k < 0 or horizon < 1 or dim < 1:
        raise InvalidArgumentError("bound arguments must be non-negative with positive H and d", argument="k")
    return lipschitz / math.sqrt(horizon * dim) * rho ** k * dist0


def sufficient_iterations_real(lipschitz: float, dist0: float, tau: float, horizon: int, dim: int,
                               rho: float) -> float:
    """Un-ceiled iteration count log(L·dist0 / (τ√(Hd))) / log(1/ρ), or 0 if already met."""
    _check_rate(rho)
    if not tau > 0:
        raise InvalidArgumentError(f"threshold must be positive, got {tau}", argument="tau")
    ratio = lipschitz * dist0 / (tau * math.sqrt(horizon * dim))
    if ratio <= 1.0:
        return 0.0
    return math.log(ratio) / math.log(1.0 / rho)


def sufficient_iterations(lipschitz: float, dist0: float, tau: float, horizon: int, dim: int, rho: float) -> int:
    """
    Iterations that guarantee r_k ≤ τ under contraction ρ.

    Returns 0 when the threshold is already met at initialization, that is
    when L·dist0 ≤ τ√(Hd).
    """
    value = sufficient_iterations_real(lipschitz, dist0, tau, horizon, dim, rho)
    return max(0, math.ceil(value - CEIL_SLACK))


def warm_start_saving(alpha: float, rho: float) -> float:
    """Iterations saved by shrinking the initial distance by α: log(1/α)/log(1/ρ)."""
    _check_rate(rho)
    if not 0.0 < alpha < 1.0:
        raise InvalidArgumentError(f"alpha must lie in (0, 1), got {alpha}", argument="alpha")
    return math.log(1.0 / alpha) / math.log(1.0 / rho)
