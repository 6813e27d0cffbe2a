"""
Logging module for the EqM action decoder.
Provides structured logging with context information.
"""
from .logger import (
    configure_logging,
    get_logger,
    numpy_values,
    run_context,
)

__all__ = [
    "configure_logging",
    "get_logger",
    "numpy_values",
    "run_context",
]
