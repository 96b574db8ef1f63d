"""Exception types shared across the package."""

from __future__ import annotations


class VerifairError(Exception):
    """Base class for all errors raised by this package."""


class ScoreParseError(VerifairError):
    """A score or protocol file could not be parsed."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ValidationError(VerifairError):
    """Input violates a precondition (bad parameter, undersized data, ...)."""


class UnreachableTargetError(VerifairError):
    """No observed threshold yields a positive FMR at or below the target.

    Carries the quantized-to-zero fallback in ``result``: the threshold just
    above the largest nonmated score, where the achieved FMR is exactly 0.
    """

    def __init__(self, message: str, result=None):
        self.result = result
        super().__init__(message)
