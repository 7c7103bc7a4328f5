"""
Exception hierarchy for ringlight.

Library code raises these; only the command-line front end turns them into
exit codes.
"""

from typing import Optional


class RinglightError(Exception):
    """Base exception for ringlight errors."""
    pass


class ConfigError(RinglightError, ValueError):
    """Invalid parameters, ranges, budgets or configuration files."""
    pass


class DomainError(ConfigError):
    """Input outside the domain of an operation."""
    pass


class NumericalError(RinglightError, ArithmeticError):
    """Base exception for failures of a numerical procedure."""
    pass


class IntegrationError(NumericalError):
    """Raised when an ODE integration cannot proceed."""

    def __init__(self, message: str, last_good_time: Optional[float] = None):
        super().__init__(message)
        self.last_good_time = last_good_time


class PhysicalityError(NumericalError):
    """Raised when a covariance matrix violates the uncertainty principle."""

    def __init__(self, message: str, min_symplectic_eigenvalue: Optional[float] = None):
        super().__init__(message)
        self.min_symplectic_eigenvalue = min_symplectic_eigenvalue


class QuadratureError(NumericalError):
    """Raised when the particular-solution integral does not converge."""
    pass


class HorizonError(NumericalError):
    """Raised when a root search exhausts its time horizon."""
    pass


class DeterminantError(NumericalError):
    """Raised when a one-period map is not unimodular within tolerance."""

    def __init__(self, message: str, det: Optional[float] = None):
        super().__init__(message)
        self.det = det


EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def exit_code_for(exc: RinglightError) -> int:
    """Map a ringlight error to the documented CLI exit code."""
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    return EXIT_NUMERICAL
