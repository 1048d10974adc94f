"""Exception types shared across the package.

Everything numerical that can fail raises a subclass of DelayHopfError, so
callers (in particular the CLI) can map failures to exit codes without
matching on message strings.
"""


class DelayHopfError(Exception):
    """Base class for all package-specific failures."""


class NoHopfError(DelayHopfError):
    """Feedback magnitude at or below the Hopf threshold: no critical delay exists."""


class SeriesDivergenceError(DelayHopfError):
    """Geometric delay series diverges (|eps * omega| >= 1 on the affected branch)."""


class PolarSingularityError(DelayHopfError):
    """Polar slow flow evaluated at amplitude R below the singularity guard."""


class NewtonDivergenceError(DelayHopfError):
    """Damped Newton failed to converge; carries the last iterate."""

    def __init__(self, message, omega, T, residual_norm, iterations):
        super().__init__(message)
        self.omega = omega
        self.T = T
        self.residual_norm = residual_norm
        self.iterations = iterations


class SingularJacobianError(DelayHopfError):
    """Newton step rejected because the 2x2 Jacobian is numerically singular."""


class ContinuationSeedError(DelayHopfError):
    """First point of a continuation sweep could not be seeded or solved."""


class NoCrossingError(DelayHopfError):
    """Bisection bracket endpoints classify identically: no stability boundary inside."""


class AmbiguousClassificationError(DelayHopfError):
    """Long-run behavior could not be classified; carries the offending delay."""

    def __init__(self, message, T=None):
        super().__init__(message)
        self.T = T


class InsufficientDataError(DelayHopfError):
    """Trajectory too short for the requested analysis."""


class EmptyComparisonError(DelayHopfError):
    """Accuracy comparison found no common grid points between two curves."""
