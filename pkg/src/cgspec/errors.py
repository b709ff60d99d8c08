"""Exception types raised across the package."""

from __future__ import annotations


class CGSpecError(Exception):
    """Base class for all package errors."""


class NotAGroup(CGSpecError):
    """A Cayley table failed one of the group axioms."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class ClosureCapExceeded(CGSpecError):
    pass


class SizeCapExceeded(CGSpecError):
    pass


class UnknownSpec(CGSpecError, ValueError):
    pass


class EmptyNoncentralPart(CGSpecError):
    pass


class ConditionNotSatisfied(CGSpecError):
    """Raised by closed-form routines when the centralizer trichotomy fails."""

    def __init__(self, witness: tuple[int, int]):
        super().__init__(f"centralizer trichotomy fails for pair {witness}")
        self.witness = witness


class NoConvergence(CGSpecError):
    pass


class AmbiguousClustering(CGSpecError):
    pass


class EmptyOrFullSubset(CGSpecError, ValueError):
    pass


class HypothesisViolated(CGSpecError, ValueError):
    pass
