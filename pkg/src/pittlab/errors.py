"""Exception hierarchy shared by every module."""

from __future__ import annotations


class PittLabError(Exception):
    """Base class for all toolkit errors."""


class InvalidConfigError(PittLabError, ValueError):
    """Parameters violate a precondition (bad multiplicities, exponents, ...)."""


class PoleError(PittLabError, ValueError):
    """A Gamma function was evaluated at one of its poles."""


class NumericalFailure(PittLabError, ArithmeticError):
    """Quadrature did not reach its tolerance at the maximum refinement."""

    def __init__(self, message: str, achieved: float | None = None):
        super().__init__(message)
        self.achieved = achieved


class DomainError(PittLabError, ValueError):
    """Input lies outside the supported domain (e.g. unbounded support)."""


class UnsupportedShapeError(PittLabError, ValueError):
    """A tabulated weight's level sets could not be bracketed."""


class CalibrationError(PittLabError):
    """Independent quadrature pipelines disagree beyond tolerance."""
