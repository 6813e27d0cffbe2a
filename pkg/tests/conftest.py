"""
Shared fixtures for the EqM decoder test suite.
"""
import os
import sys
from typing import Callable

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src"))

from eqm_decoder.core import ActionChunk, Condition  # noqa: E402
from eqm_decoder.envs import EnvSpec  # noqa: E402
from eqm_decoder.field import AnalyticField, AnalyticKind, FieldConfig, init_params  # noqa: E402


def numeric_gradient(fun: Callable[[np.ndarray], float], vector: np.ndarray, step: float = 1e-6) -> np.ndarray:
    """Central finite differences of a scalar function over every coordinate."""
    grad = np.empty_like(vector)
    for i in range(vector.size):
        plus = vector.copy()
        minus = vector.copy()
        plus[i] += step
        minus[i] -= step
        grad[i] = (fun(plus) - fun(minus)) / (2.0 * step)
    return grad


def relative_error(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), 1.0)))


@pytest.fixture
def reach_spec() -> EnvSpec:
    return EnvSpec()


@pytest.fixture
def small_field_config(reach_spec: EnvSpec) -> FieldConfig:
    return FieldConfig(
        horizon=reach_spec.horizon,
        action_dim=reach_spec.action_dim,
        cond_width=reach_spec.cond_width,
        hidden_widths=(8, 8),
    )


@pytest.fixture
def random_params(small_field_config: FieldConfig):
    return init_params(small_field_config, 7, zero_output_layer=False)


@pytest.fixture
def reach_condition() -> Condition:
    return Condition(state=np.array([0.2, 0.3, 0.0]), goal=np.array([0.7, 0.6]))


@pytest.fixture
def scalar_linear_field() -> AnalyticField:
    return AnalyticField(AnalyticKind.LINEAR_CONTRACTION, ActionChunk(np.zeros((1, 1))), stiffness=1.0)
