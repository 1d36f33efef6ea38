"""Exception hierarchy shared by every computational module."""

from __future__ import annotations


class CasimirError(Exception):
    """Base class for all package errors."""


class PoleError(CasimirError, ZeroDivisionError):
    """A response function was evaluated exactly on its pole."""


class InvalidKinematicsError(CasimirError, ValueError):
    """Wavevector/frequency pair outside the evanescent (imaginary-axis) domain."""


class PreconditionError(CasimirError, ValueError):
    """Inputs violate the regime or model assumptions of an approximation."""


class OutOfRegimeError(PreconditionError):
    """An asymptotic formula was requested outside its range of validity."""


class NoModeError(CasimirError, ValueError):
    """The requested polarization has no surface plasmon on the given mirror(s)."""


class ConvergenceError(CasimirError, RuntimeError):
    """An adaptive procedure ran out of budget before meeting its tolerance.

    The best available estimate is kept on ``partial`` so that sweeps can
    flag the row instead of discarding it.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class NoSignChangeError(CasimirError, ValueError):
    """Bracketing root finder called on an interval without a sign change."""


class SeriesDivergenceError(CasimirError, ArithmeticError):
    """Terms of a series stopped decreasing."""


class ConfigError(CasimirError, ValueError):
    """Malformed run configuration (CLI)."""
