"""Error hierarchy shared by every module of the toolkit.

Each error carries a stable public ``name`` (printed by the CLI, returned
in hub error bodies) and the process ``exit_code`` used when it reaches
the command line: 1 validation or completeness failure, 2 I/O failure,
3 DSAR execution failure, 64 usage error.
"""

from __future__ import annotations

__all__ = [
    "BadFilterError",
    "ConflictError",
    "DescriptorError",
    "DriverError",
    "EmptyArchiveError",
    "EmptyPolicyError",
    "IoError",
    "MissingSpanError",
    "NotFoundError",
    "OutOfOrderError",
    "PathError",
    "ResumeMismatchError",
    "SpanBoundsError",
    "TaskNotDoneError",
    "TiltSyntaxError",
    "ToolkitError",
    "UnknownCategoryError",
    "UnknownCommandError",
    "UnknownFieldError",
    "ValidationError",
    "VersionConflictError",
]


class ToolkitError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1
    #: stable public name; defaults to the class name, overridden where
    #: the published name differs from the Python identifier
    name: str = "ToolkitError"

    def __init_subclass__(cls, **kwargs: object) -> None:
        super().__init_subclass__(**kwargs)
        if "name" not in cls.__dict__:
            cls.name = cls.__name__


class TiltSyntaxError(ToolkitError):
    """Malformed document text; carries the offending position."""

    name = "SyntaxError"

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ValidationError(ToolkitError):
    """Schema violation; ``path`` locates the offending field."""

    def __init__(self, message: str, path: str) -> None:
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class ConflictError(ToolkitError):
    """A diff entry's recorded before-value does not match the document."""

    def __init__(self, message: str, path: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


class PathError(ToolkitError):
    """A diff entry references a path absent from the document."""

    def __init__(self, message: str, path: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


class EmptyPolicyError(ToolkitError):
    """Policy text has an empty body."""


class OutOfOrderError(ToolkitError):
    """Submission targets a field other than the one at the cursor."""


class SpanBoundsError(ToolkitError):
    """Annotation span is inverted or outside the policy body."""


class MissingSpanError(ToolkitError):
    """A present-answer was submitted without any text span."""


class UnknownFieldError(ToolkitError):
    """Field key is not part of the annotation question queue."""


class TaskNotDoneError(ToolkitError):
    """Export requested while the task still has open questions."""


class VersionConflictError(ToolkitError):
    """Stored version counter does not allow the submitted version."""


class NotFoundError(ToolkitError):
    """No stored record under the requested id or version."""


class BadFilterError(ToolkitError):
    """Filter expression is malformed or ill-typed."""


class UnknownCategoryError(ToolkitError):
    """Parameterized intent names a category absent from the document."""


class DescriptorError(ToolkitError):
    """DSAR descriptor violates a structural rule."""

    def __init__(self, message: str, step_index: int | None = None) -> None:
        if step_index is not None:
            message = f"step {step_index}: {message}"
        super().__init__(message)
        self.step_index = step_index


class DriverError(ToolkitError):
    """Raised by site drivers; recorded as a step failure by the engine."""

    exit_code = 3


class ResumeMismatchError(ToolkitError):
    """Resumed session does not belong to the given descriptor."""

    exit_code = 3


class IoError(ToolkitError):
    """Filesystem or stream failure while reading or writing."""

    exit_code = 2


class EmptyArchiveError(ToolkitError):
    """Archive directory contains no files."""


class UnknownCommandError(ToolkitError):
    """Unrecognized command-line invocation."""

    name = "UnknownCommand"
    exit_code = 64
