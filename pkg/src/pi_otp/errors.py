"""Exception types shared across the toolkit.

Each class carries the process exit code the CLI reports for it.
"""

from __future__ import annotations


class PiOtpError(Exception):
    exit_code = 1


class ValidationError(PiOtpError, ValueError):
    """Malformed input: empty passphrase, wrong digest length, bad config."""

    exit_code = 3


class DomainError(PiOtpError, ValueError):
    """Argument outside the mathematical domain of an operation."""

    exit_code = 4


class BoundsError(PiOtpError, IndexError):
    """Read past the addressable end of a digit pool."""

    exit_code = 5

    def __init__(self, message: str, limit: int | None = None):
        super().__init__(message)
        self.limit = limit


class DigitFileError(PiOtpError, OSError):
    """Digit file missing, unreadable, or containing non-hex data."""

    exit_code = 6

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class CapacityError(PiOtpError, ValueError):
    """Message longer than the pad can cover."""

    exit_code = 7
