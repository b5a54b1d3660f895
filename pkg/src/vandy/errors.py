"""Exception and warning types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An input lies outside the domain where a quantity is defined."""


class DuplicateNode(DomainError):
    """Two nodes coincide as complex numbers."""


class NeedTwoNodes(DomainError):
    """A separation-dependent quantity was requested for a single node."""


class RankDeficient(ArithmeticError):
    """The Gram matrix is numerically singular.

    The spectral summary computed before the failure is available as
    ``summary`` so callers can still inspect it.
    """

    def __init__(self, message: str, summary=None):
        super().__init__(message)
        self.summary = summary


class IllConditioned(RuntimeWarning):
    """The Gram matrix condition estimate exceeds the reliability threshold."""
