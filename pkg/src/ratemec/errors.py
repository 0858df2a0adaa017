"""Semantic exception hierarchy shared by every ratemec module.

Public functions never raise bare ``ValueError``; callers that want to
distinguish failure modes catch these instead.  The CLI maps each class
to a fixed process exit code.
"""


class RatemecError(Exception):
    """Base class for every error raised by this package."""


class DomainError(RatemecError, ValueError):
    """Inputs violate a contract: wrong range, wrong shape, bad flag combo."""


class InfeasibleError(RatemecError):
    """The constraint set admits no mixture at all."""


class DimensionCapError(RatemecError):
    """Map enumeration would exceed the configured alphabet cap."""


class MonotonicityError(RatemecError):
    """A rate sweep produced a decreasing value curve (solver bug signal)."""


class OracleMismatchError(RatemecError):
    """Closed-form value and brute-force oracle value disagree."""
