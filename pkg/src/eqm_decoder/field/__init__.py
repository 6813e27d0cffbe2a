"""
Conditional vector fields: the trainable network and analytic test fields.
"""
from .analytic import AnalyticField, AnalyticKind, analytic_eval, skew_rotate
from .config import ACTIVATION_CODES, FieldConfig
from .network import (
    FieldBatch,
    FieldParams,
    field_forward,
    field_forward_batch,
    field_param_gradient,
    init_params,
)

__all__ = [
    "ACTIVATION_CODES",
    "AnalyticField",
    "AnalyticKind",
    "FieldBatch",
    "FieldConfig",
    "FieldParams",
    "analytic_eval",
    "field_forward",
    "field_forward_batch",
    "field_param_gradient",
    "init_params",
    "skew_rotate",
]
