"""
Structured logging for the EqM action decoder.

Every record carries the service name; inside a CLI run it also carries the
command and seed bound through run_context.
"""
import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, ContextManager, Mapping

import numpy as np
import structlog
from structlog.stdlib import BoundLogger
from structlog.types import EventDict, WrappedLogger

from ..config import config

SERVICE_NAME = "eqm-decoder"
LOG_FILE_NAME = "eqm_decoder.log"
MAX_INLINE_ARRAY = 16


def numpy_values(logger: WrappedLogger, method_name: str, event_dict: EventDict) -> EventDict:
    """Render numpy scalars as Python numbers and arrays as lists, or as their shape when large."""
    for key, value in event_dict.items():
        if isinstance(value, np.generic):
            event_dict[key] = value.item()
        elif isinstance(value, np.ndarray):
            event_dict[key] = value.tolist() if value.size <= MAX_INLINE_ARRAY else f"array{value.shape}"
    return event_dict


def _handler(settings: Mapping[str, Any]) -> logging.Handler:
    destination = settings.get("destination", "stdout")
    if destination == "file":
        local = settings.get("local", {}) or {}
        log_dir = Path(local.get("log_dir", "logs"))
        log_dir.mkdir(parents=True, exist_ok=True)
        return RotatingFileHandler(
            log_dir / LOG_FILE_NAME,
            maxBytes=int(local.get("max_size_mb", 10)) * 1024 * 1024,
            backupCount=int(local.get("backup_count", 5)),
        )
    return logging.StreamHandler(sys.stderr if destination == "stderr" else sys.stdout)


def configure_logging() -> None:
    """Configure stdlib logging and structlog from the logging section of the settings."""
    settings = config.section("logging")
    log_level = getattr(logging, str(settings.get("level", "INFO")).upper())

    handler = _handler(settings)
    handler.setFormatter(logging.Formatter("%(message)s"))
    root = logging.getLogger()
    root.handlers = [handler]
    root.setLevel(log_level)

    processors = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_log_level,
        structlog.stdlib.add_logger_name,
        structlog.processors.TimeStamper(fmt="iso"),
        numpy_values,
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]

    if settings.get("format", "json") == "json":
        processors.append(structlog.processors.JSONRenderer())
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=False))

    structlog.configure(
        processors=processors,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def get_logger(name: str, **initial_context: Any) -> BoundLogger:
    """
    Get a structured logger with the given name and initial context.

    Args:
        name: The name of the logger
        **initial_context: Initial context values to bind to the logger

    Returns:
        A structured logger instance
    """
    context = {
        "environment": config.get("environment", "development"),
        "service": SERVICE_NAME,
    }
    context.update(initial_context)

    return structlog.get_logger(name).bind(**context)


def run_context(**values: Any) -> ContextManager[None]:
    """Bind values to every record logged, from any module, until the block exits."""
    return structlog.contextvars.bound_contextvars(**values)


configure_logging()
