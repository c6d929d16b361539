"""Exception types shared by every module."""


class ValtreeError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ParseError(ValtreeError, ValueError):
    """Malformed text input. ``position`` is a 0-based character offset."""

    exit_code = 2

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class DomainError(ValtreeError, ValueError):
    """Well-formed input that lies outside the supported domain."""

    exit_code = 3


class InvariantViolation(ValtreeError, AssertionError):
    """An internal consistency check failed."""

    exit_code = 4
