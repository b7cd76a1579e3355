"""Exception types shared across the package."""

from __future__ import annotations


class ElPriorError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ElPriorError, ValueError):
    """Malformed polynomial, family, prior or data text."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class TooFewPoints(ElPriorError, ValueError):
    pass


class DegenerateSample(ElPriorError, ValueError):
    """All observations equal, so the second central moment is zero."""


class OutOfRange(ElPriorError, ValueError):
    pass


class NoDensity(ElPriorError, TypeError):
    """Raised for priors described only through their log-derivatives."""


class PreconditionViolated(ElPriorError, ValueError):
    pass


class UnsupportedPriorClass(ElPriorError, TypeError):
    pass
