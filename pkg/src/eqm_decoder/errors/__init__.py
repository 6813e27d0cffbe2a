"""
Error handling module for the EqM action decoder.
Provides custom exceptions and error handling utilities.
"""
from .exceptions import (
    AcceptanceError,
    ConfigurationError,
    ContractError,
    EqmDecoderError,
    FormatError,
    InsufficientDataError,
    InvalidArgumentError,
    NumericError,
    SolverDivergenceError,
    TrainingDivergenceError,
)
from .handlers import (
    EXIT_ACCEPTANCE,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_USAGE,
    exit_code_for,
    handle_numeric_error,
    log_error,
    safe_execute,
)

__all__ = [
    # Exceptions
    "AcceptanceError",
    "ConfigurationError",
    "ContractError",
    "EqmDecoderError",
    "FormatError",
    "InsufficientDataError",
    "InvalidArgumentError",
    "NumericError",
    "SolverDivergenceError",
    "TrainingDivergenceError",

    # Handlers
    "EXIT_ACCEPTANCE",
    "EXIT_NUMERIC",
    "EXIT_OK",
    "EXIT_USAGE",
    "exit_code_for",
    "handle_numeric_error",
    "log_error",
    "safe_execute",
]
