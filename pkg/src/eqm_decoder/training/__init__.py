"""
Training objectives, optimizers and the minibatch training loop.
"""
from .dataset import Dataset, DemoBatch, NormalizationStats, holdout_split
from .diagnostics import (
    MAX_MEAN_RESIDUAL,
    MAX_MEDIAN_RATIO,
    EquilibriumDiagnostics,
    data_residuals,
    equilibrium_diagnostics,
)
from .objectives import eqm_loss, flow_loss
from .optim import SGD, Adam, Optimizer, make_optimizer
from .schedule import ScheduleKind, ScheduleSpec, schedule_weights, weight_schedule
from .trainer import TrainConfig, train

__all__ = [
    "MAX_MEAN_RESIDUAL",
    "MAX_MEDIAN_RATIO",
    "Adam",
    "Dataset",
    "DemoBatch",
    "EquilibriumDiagnostics",
    "NormalizationStats",
    "Optimizer",
    "SGD",
    "ScheduleKind",
    "ScheduleSpec",
    "TrainConfig",
    "data_residuals",
    "eqm_loss",
    "equilibrium_diagnostics",
    "flow_loss",
    "holdout_split",
    "make_optimizer",
    "schedule_weights",
    "train",
    "weight_schedule",
]
