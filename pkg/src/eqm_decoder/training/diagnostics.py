"""
Post-training checks of the equilibrium property on demonstration data.
"""
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from ..field import FieldParams, field_forward_batch
from .dataset import Dataset

MAX_MEAN_RESIDUAL = 0.05
MAX_MEDIAN_RATIO = 0.5


@dataclass(frozen=True)
class EquilibriumDiagnostics:
    mean_residual: float  # at data chunks under their own conditions
    median_ratio: float  # own-condition residual / mismatched-condition residual
    records: int = 0

    def failed_checks(
        self,
        max_mean_residual: float = MAX_MEAN_RESIDUAL,
        max_median_ratio: float = MAX_MEDIAN_RATIO,
    ) -> List[str]:
        """Names of the thresholds this run misses; NaN values always miss."""
        failed = []
        if not self.mean_residual < max_mean_residual:
            failed.append("mean_residual")
        if not self.median_ratio < max_median_ratio:
            failed.append("median_ratio")
        return failed

    def to_dict(self) -> Dict[str, Any]:
        return {"mean_residual": self.mean_residual, "median_ratio": self.median_ratio, "records": self.records}


def data_residuals(params: FieldParams, conds: np.ndarray, chunks: np.ndarray) -> np.ndarray:
    """Normalized residual ‖f(A; c)‖/√(Hd) for each row."""
    outputs = field_forward_batch(params, chunks, conds)
    size = outputs.shape[1] * outputs.shape[2]
    return np.sqrt(np.sum(outputs * outputs, axis=(1, 2)) / size)


def equilibrium_diagnostics(params: FieldParams, dataset: Dataset, seed: int = 0) -> EquilibriumDiagnostics:
    """
    Compare residuals at demonstrations under matching and shuffled conditions.

    Args:
        params: Time-free field parameters
        dataset: Demonstrations, normally episodes held out of training
        seed: Seed of the condition shuffle

    Returns:
        Mean matched residual and the median matched/mismatched ratio
    """
    own = data_residuals(params, dataset.conds, dataset.chunks)
    shuffled = dataset.conds[np.random.default_rng(seed).permutation(dataset.size)]
    other = data_residuals(params, shuffled, dataset.chunks)
    ratios = own / np.maximum(other, 1e-12)
    return EquilibriumDiagnostics(
        mean_residual=float(own.mean()),
        median_ratio=float(np.median(ratios)),
        records=dataset.size,
    )
