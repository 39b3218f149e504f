"""Exception hierarchy shared by every module.

All errors derive from ``ValueError`` so callers that only care about
"bad input" can catch that; the CLI maps them to exit status 2.
"""


class CurvolError(ValueError):
    """Base class for all library errors."""


class InvalidInputError(CurvolError):
    """Matrix data is malformed (non-finite entries, ragged rows, wrong ndim)."""


class InvalidArgumentError(CurvolError):
    """An argument is out of range for the given shapes."""


class PreconditionError(CurvolError):
    """A numerical precondition (full column rank, positive definiteness) fails."""


class DegenerateError(CurvolError):
    """The volume-sampling distribution or a selection has no positive weight."""


class EnumerationSizeError(CurvolError):
    """An exact enumeration would exceed the configured pair cap."""
