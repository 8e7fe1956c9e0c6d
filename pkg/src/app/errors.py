"""
Error types shared by the trainers, the simulator and the experiment CLI.

Every error carries a machine-readable code (mirrored in report error
markers) and the exit code the CLI maps it to.
"""
from typing import Any, Dict


class BoostingError(Exception):
    """Base class for all library errors."""

    code = "ERROR"
    exit_code = 1

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details


class InvalidModelError(BoostingError):
    code = "INVALID_MODEL"


class DomainError(BoostingError, ValueError):
    code = "DOMAIN_ERROR"


class PreconditionError(BoostingError):
    code = "PRECONDITION_FAILED"


class InvariantViolationError(BoostingError):
    code = "INVARIANT_VIOLATION"


class EnumerationCapError(BoostingError):
    code = "ENUMERATION_CAP"
    exit_code = 3


class ResourceCapError(BoostingError):
    code = "RESOURCE_CAP"
    exit_code = 3


class ConfigError(BoostingError):
    code = "CONFIG_ERROR"
    exit_code = 2


class DatasetGenerationError(BoostingError):
    code = "DATASET_ERROR"
    exit_code = 2


def error_payload(exc: BaseException) -> Dict[str, Any]:
    """
    Render an exception in the standard error envelope.

    Args:
        exc: Any exception; non-library errors get code INTERNAL_ERROR

    Returns:
        dict: {"success": False, "error": {"code": ..., "message": ...}}
    """
    if isinstance(exc, BoostingError):
        error = {"code": exc.code, "message": exc.message}
        if exc.details:
            error["details"] = exc.details
    else:
        error = {"code": "INTERNAL_ERROR", "message": str(exc)}
    return {"success": False, "error": error}
