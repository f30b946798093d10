"""Exception types shared across the package."""


class SwitchcolError(Exception):
    """Base class for all errors raised by switchcol."""


class InvalidInputError(SwitchcolError, ValueError):
    """Input violates a documented precondition (dimensions, ranges, shape)."""


class ParseError(InvalidInputError):
    """Malformed text input. Carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceLimitError(SwitchcolError, RuntimeError):
    """An enumeration exceeded its configured cap."""


class PreconditionError(SwitchcolError):
    """An operation was called outside the regime it supports."""


class InvariantError(SwitchcolError, AssertionError):
    """An internal invariant failed. Indicates a bug, never bad input."""
