"""
Error handling utilities for the EqM action decoder.
Provides error logging, numeric-error conversion and exit-code mapping.
"""
import functools
import traceback
from typing import Any, Callable, Dict, Optional, TypeVar, Union, cast

import numpy as np

from ..logging import get_logger
from .exceptions import (
    AcceptanceError,
    EqmDecoderError,
    NumericError,
)

F = TypeVar("F", bound=Callable[..., Any])
T = TypeVar("T")

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_ACCEPTANCE = 3


def log_error(
    error: Exception,
    level: str = "error",
    include_traceback: bool = True,
    additional_context: Optional[Dict[str, Any]] = None,
) -> None:
    """
    Log an exception as one structured record.

    Package errors contribute their error_code and details; anything else is
    logged by type and message.

    Args:
        error: Exception to record
        level: Logger method name, e.g. "warning" or "error"
        include_traceback: Attach the active traceback
        additional_context: Extra fields for the record
    """
    context = dict(additional_context or {})
    if isinstance(error, EqmDecoderError):
        context.update(error.to_dict())
    else:
        context.update(error_type=type(error).__name__, message=str(error))
    if include_traceback:
        context["traceback"] = traceback.format_exc()

    getattr(logger, level)("Error occurred", **context)


def handle_numeric_error(
    func: Optional[F] = None,
    *,
    operation: Optional[str] = None,
    reraise: bool = True,
) -> Union[Callable[[F], F], F]:
    """
    Decorator turning NumPy floating-point exceptions into NumericError.

    Overflow and invalid operations raise inside the decorated call instead of
    silently producing inf/NaN.

    Args:
        func: Function to wrap, when used without arguments
        operation: Name recorded on the error; defaults to the function name
        reraise: Raise the NumericError; otherwise log it and return None
    """
    def decorator(func: F) -> F:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            try:
                with np.errstate(over="raise", invalid="raise"):
                    return func(*args, **kwargs)
            except FloatingPointError as e:
                custom_error = NumericError(
                    message=str(e),
                    operation=operation or func.__name__,
                )
                log_error(custom_error, include_traceback=False)

                if reraise:
                    raise custom_error from e

                return None

        return cast(F, wrapper)

    # Bare @handle_numeric_error or @handle_numeric_error(...)
    if func is None:
        return decorator

    return decorator(func)


def safe_execute(
    func: Callable[..., T],
    *args: Any,
    default_value: Optional[T] = None,
    log_level: str = "warning",
    **kwargs: Any,
) -> Optional[T]:
    """
    Call func, logging and swallowing any exception.

    Returns:
        func's result, or default_value when it raised
    """
    try:
        return func(*args, **kwargs)
    except Exception as e:
        log_error(e, level=log_level, include_traceback=False)
        return default_value


def exit_code_for(error: BaseException) -> int:
    """
    Map an exception to the command-line exit code.

    Args:
        error: The exception that terminated a command

    Returns:
        1 for usage/config errors, 2 for numeric failures, 3 for acceptance failures
    """
    if isinstance(error, AcceptanceError):
        return EXIT_ACCEPTANCE
    if isinstance(error, (NumericError, FloatingPointError)):
        return EXIT_NUMERIC
    # Configuration, argument, file-format and missing-file errors
    return EXIT_USAGE
