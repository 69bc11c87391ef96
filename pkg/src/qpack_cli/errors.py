"""Exception hierarchy for qpack-cli.

Every error carries the process exit code the CLI should use when it
surfaces at the top level.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from qpack_cli.enumeration import Packing

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_LIMIT = 2
EXIT_INTERNAL = 3


class QPackError(Exception):
    """Base exception for qpack errors."""

    exit_code = EXIT_INVALID

    def __init__(self, message: str, exit_code: int | None = None):
        self.message = message
        if exit_code is not None:
            self.exit_code = exit_code
        super().__init__(self.message)


class ConfigParseError(QPackError):
    """Raised when a cluster file is not valid JSON."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column


class ConfigValidationError(QPackError):
    """Raised when a cluster file fails schema validation."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class GroupRelationError(QPackError):
    """Raised when generator matrices break orthogonality or their relations."""

    exit_code = EXIT_INTERNAL


class OrbitOverflowError(QPackError):
    """Raised when orbit closure exceeds its safety cap."""

    exit_code = EXIT_INTERNAL


class ClusterError(QPackError):
    """Raised when shells cannot form an origin-symmetric cluster."""

    pass


class EmbeddingInvalid(QPackError):
    """Raised when the w-vectors are not orthogonal with a common norm."""

    pass


class DimensionMismatch(QPackError):
    """Raised when inputs disagree on the physical or superspace dimension."""

    pass


class InvariantViolation(QPackError):
    """Raised when an internal consistency check fails."""

    exit_code = EXIT_INTERNAL


class LimitExceeded(QPackError):
    """Raised when enumeration hits a limit with work still pending.

    The partial packing collected so far is available as ``partial``.
    """

    exit_code = EXIT_LIMIT

    def __init__(self, message: str, partial: Packing):
        super().__init__(message)
        self.partial = partial


class PackingFileError(QPackError):
    """Raised when a packing file cannot be written, read or understood."""

    def __init__(self, message: str, path: str | None = None):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
