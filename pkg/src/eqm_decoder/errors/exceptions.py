"""
Custom exception classes for the EqM action decoder.
Provides standardized exceptions for different types of errors.
"""
from typing import Any, Dict, List, Optional


class EqmDecoderError(Exception):
    """Base exception class for all EqM decoder errors."""

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        """
        Initialize the exception.

        Args:
            message: Error message
            error_code: Optional error code for categorization
            details: Optional dictionary with additional error details
        """
        self.message = message
        self.error_code = error_code or "UNKNOWN_ERROR"
        self.details = details or {}
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert the exception to a dictionary for logging or serialization.

        Returns:
            Dictionary representation of the exception
        """
        return {
            "error_type": self.__class__.__name__,
            "error_code": self.error_code,
            "message": self.message,
            "details": self.details,
        }


# Configuration errors
class ConfigurationError(EqmDecoderError):
    """Exception raised for errors in the configuration or command usage."""

    def __init__(
        self,
        message: str,
        config_key: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        """
        Initialize the exception.

        Args:
            message: Error message
            config_key: The configuration key that caused the error
            details: Optional dictionary with additional error details
        """
        error_details = details or {}
        if config_key:
            error_details["config_key"] = config_key

        super().__init__(
            message=message,
            error_code="CONFIGURATION_ERROR",
            details=error_details
        )


class InvalidArgumentError(EqmDecoderError):
    """Exception raised when a library call receives a malformed argument."""

    def __init__(
        self,
        message: str,
        argument: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        error_details = details or {}
        if argument:
            error_details["argument"] = argument

        super().__init__(
            message=message,
            error_code="INVALID_ARGUMENT",
            details=error_details
        )


# Numeric errors
class NumericError(EqmDecoderError):
    """Exception raised when a computation produces non-finite values."""

    def __init__(
        self,
        message: str,
        layer: Optional[str] = None,
        operation: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        """
        Initialize the exception.

        Args:
            message: Error message
            layer: The network layer where the non-finite value appeared
            operation: The operation that failed (e.g., 'field_forward')
            details: Optional dictionary with additional error details
        """
        error_details = details or {}
        if layer:
            error_details["layer"] = layer
        if operation:
            error_details["operation"] = operation

        super().__init__(
            message=message,
            error_code="NUMERIC_ERROR",
            details=error_details
        )


class SolverDivergenceError(NumericError):
    """Exception raised when an equilibrium or flow solve leaves the finite range."""

    def __init__(
        self,
        message: str,
        iteration: int,
        details: Optional[Dict[str, Any]] = None
    ):
        error_details = details or {}
        error_details["iteration"] = iteration

        super().__init__(
            message=message,
            operation="solve",
            details=error_details
        )
        self.iteration = iteration
        self.error_code = "SOLVER_DIVERGENCE"


class TrainingDivergenceError(NumericError):
    """Exception raised when the training loss becomes non-finite."""

    def __init__(
        self,
        message: str,
        step: int,
        details: Optional[Dict[str, Any]] = None
    ):
        error_details = details or {}
        error_details["step"] = step

        super().__init__(
            message=message,
            operation="train",
            details=error_details
        )
        self.step = step
        self.error_code = "TRAINING_DIVERGENCE"


# Analysis errors
class ContractError(EqmDecoderError):
    """Exception raised when an analysis is called outside its hypothesis."""

    def __init__(
        self,
        message: str,
        hypothesis: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        error_details = details or {}
        if hypothesis:
            error_details["hypothesis"] = hypothesis

        super().__init__(
            message=message,
            error_code="CONTRACT_ERROR",
            details=error_details
        )


class InsufficientDataError(EqmDecoderError):
    """Exception raised when an estimate has too few samples."""

    def __init__(
        self,
        message: str,
        available: Optional[int] = None,
        required: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        error_details = details or {}
        if available is not None:
            error_details["available"] = available
        if required is not None:
            error_details["required"] = required

        super().__init__(
            message=message,
            error_code="INSUFFICIENT_DATA",
            details=error_details
        )


# File format errors
class FormatError(EqmDecoderError):
    """Exception raised for malformed checkpoint or dataset files."""

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        error_details = details or {}
        if path:
            error_details["path"] = path

        super().__init__(
            message=message,
            error_code="FORMAT_ERROR",
            details=error_details
        )


# Acceptance errors
class AcceptanceError(EqmDecoderError):
    """Exception raised when a verification suite reports violated checks."""

    def __init__(
        self,
        message: str,
        failed_checks: Optional[List[str]] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        error_details = details or {}
        if failed_checks:
            error_details["failed_checks"] = list(failed_checks)

        super().__init__(
            message=message,
            error_code="ACCEPTANCE_ERROR",
            details=error_details
        )
