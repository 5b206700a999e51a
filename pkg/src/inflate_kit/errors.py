"""Exception hierarchy.

Everything raised on purpose derives from :class:`InflateKitError`.  Errors
that describe malformed input derive from :class:`InvariantViolation`; the CLI
maps the groups onto its exit codes.
"""
from __future__ import annotations

from typing import Any


class InflateKitError(Exception):
    """Base class; ``witness`` carries whatever makes the failure checkable."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class InvariantViolation(InflateKitError):
    pass


class ParseError(InflateKitError):
    def __init__(self, message: str, path: str = "$", line: int | None = None):
        loc = path if line is None else f"{path} (line {line})"
        super().__init__(f"{loc}: {message}", witness={"path": path, "line": line})
        self.path = path
        self.line = line


class TooLarge(InflateKitError):
    pass


class HypothesisViolated(InflateKitError):
    pass


class CertificateFailed(InflateKitError):
    pass


# poset-core
class CycleDetected(InvariantViolation):
    pass


class UnknownElement(InvariantViolation):
    pass


class NotOpen(InvariantViolation):
    pass


class NotSubset(InvariantViolation):
    pass


class EmptyOpenSet(InvariantViolation):
    pass


# sheaf
class NotFunctorial(InvariantViolation):
    pass


class MissingStalk(InvariantViolation):
    pass


class PartialMap(InvariantViolation):
    pass


class BadPartition(InvariantViolation):
    pass


class MinimalityViolated(InvariantViolation):
    pass


# inflation
class BaseMismatch(InvariantViolation):
    pass


# simplicial
class EmptySimplex(InvariantViolation):
    pass


class MissingCount(InvariantViolation):
    pass


class NonPositiveCount(InvariantViolation):
    pass


class DegenerateMap(InvariantViolation):
    pass


class NotSurjective(InvariantViolation):
    pass


class NotSimplicial(InvariantViolation):
    pass


class NotConnected(InvariantViolation):
    pass
