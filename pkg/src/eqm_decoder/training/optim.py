"""
First-order optimizers over flat parameter vectors.

Each optimizer keeps its own state between calls to step(); the caller owns
the parameter vector.
"""
from abc import ABC, abstractmethod
from typing import Any, Dict

import numpy as np

from ..errors import ConfigurationError

OPTIMIZER_TAGS = ("sgd", "adam")


class Optimizer(ABC):
    """Base class: step(params, grad) returns the updated parameter vector."""

    def __init__(self, learning_rate: float):
        if not learning_rate > 0:
            raise ConfigurationError(
                f"learning rate must be positive, got {learning_rate}",
                config_key="training.learning_rate",
            )
        self.learning_rate = learning_rate
        self.state: Dict[str, Any] = {"step": 0}

    @abstractmethod
    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        ...


class SGD(Optimizer):
    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        self.state["step"] += 1
        return params - self.learning_rate * grad


class Adam(Optimizer):
    """Adaptive-moment updates with bias-corrected first and second moments."""

    def __init__(self, learning_rate: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        super().__init__(learning_rate)
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        if "m" not in self.state:
            self.state["m"] = np.zeros_like(params)
            self.state["v"] = np.zeros_like(params)
        self.state["step"] += 1
        t = self.state["step"]
        m = self.state["m"] = self.beta1 * self.state["m"] + (1.0 - self.beta1) * grad
        v = self.state["v"] = self.beta2 * self.state["v"] + (1.0 - self.beta2) * grad * grad
        m_hat = m / (1.0 - self.beta1 ** t)
        v_hat = v / (1.0 - self.beta2 ** t)
        return params - self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)


def make_optimizer(tag: str, learning_rate: float) -> Optimizer:
    """Build an optimizer from its config tag ('sgd' or 'adam')."""
    if tag == "sgd":
        return SGD(learning_rate)
    if tag == "adam":
        return Adam(learning_rate)
    raise ConfigurationError(f"unknown optimizer '{tag}', expected one of {OPTIMIZER_TAGS}",
                             config_key="training.optimizer")
