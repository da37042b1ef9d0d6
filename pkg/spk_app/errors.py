"""
Error Hierarchy Module

This module defines the exception types raised across the application.
Every error derives from SpkError so the command line layer can map a whole
category of failures onto a single exit code:

- Input problems (bad names, malformed text, invalid objects) become usage errors.
- Disagreements between independently computed results and broken internal
  invariants signal a defect and are reported as invariant breaches.
"""

from typing import Any, Dict, Optional


class SpkError(Exception):
    """Base class for every error raised by the application."""


class PolynomialError(SpkError):
    """Raised for invalid polynomial arithmetic (bad exponents, unassigned variables, division by zero)."""


class PolynomialParseError(PolynomialError):
    """
    Raised when polynomial text cannot be parsed.

    Attributes:
        position (int): Zero-based character offset where parsing failed.
    """

    def __init__(self, message: str, position: int = 0) -> None:
        super().__init__(message, position)
        self.message = message
        self.position = position

    def __str__(self) -> str:
        return f"{self.message} (at position {self.position})"


class GrammarError(SpkError):
    """Raised when a grammar derivative is applied to an unsupported term."""


class InvalidObjectError(SpkError):
    """Raised when a combinatorial object violates the rules of its family."""


class IndexRangeError(SpkError):
    """Raised when a family or routine is requested outside its supported range of n."""


class UnknownNameError(SpkError):
    """Raised for an unknown family, grammar, substitution or check identifier."""


class ResourceGuardError(SpkError):
    """Raised when an enumeration would exceed the configured object budget."""

    def __init__(self, family: str, n: int, count: int, guard: int) -> None:
        super().__init__(family, n, count, guard)
        self.family = family
        self.n = n
        self.count = count
        self.guard = guard

    def __str__(self) -> str:
        return (
            f"Enumerating {self.family} at n={self.n} needs {self.count} objects, "
            f"above the resource guard of {self.guard}"
        )


class InvariantError(SpkError):
    """Raised when an internal invariant of a construction is broken."""


class RouteDisagreementError(InvariantError):
    """
    Raised when two routes to the same result disagree.

    Attributes:
        counterexample (Dict[str, Any]): Serializable description of the disagreement.
    """

    def __init__(self, message: str, counterexample: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message, counterexample)
        self.message = message
        self.counterexample = counterexample or {}

    def __str__(self) -> str:
        return self.message


class CheckFailedError(SpkError):
    """
    Raised inside a verification check when an identity does not hold.

    Attributes:
        counterexample (Dict[str, Any]): Serializable description of the first mismatch.
    """

    def __init__(self, message: str, counterexample: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message, counterexample)
        self.message = message
        self.counterexample = counterexample or {}

    def __str__(self) -> str:
        return self.message


class NotRealRootedError(SpkError):
    """Raised when an interlacing question is asked about a polynomial with non-real roots."""
