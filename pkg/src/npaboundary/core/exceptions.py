"""
Custom exceptions for NPA boundary computations.
"""


class NpaBoundaryError(Exception):
    """Base exception for NPA boundary operations."""
    pass


class InvalidRealizationError(NpaBoundaryError):
    """Realization parameters outside their admissible range."""
    pass


class InvalidPointError(NpaBoundaryError):
    """Correlation point with an entry outside [-1, 1] or not finite."""
    pass


class DiscriminantNegativeError(NpaBoundaryError):
    """J^2 - 4K^2 is negative beyond round-off: the point is inconsistent."""
    pass


class ScaleOutOfRangeError(NpaBoundaryError):
    """A correlator divided by a guessing probability exceeds 1 in magnitude."""
    pass


class UnsupportedLevelError(NpaBoundaryError):
    """Requested hierarchy level is not one of 1, 1+AB, 2, 3, 4."""
    pass


class DomainError(NpaBoundaryError):
    """Argument outside the domain of a closed-form oracle."""
    pass


class SolverError(NpaBoundaryError):
    """The semidefinite solver did not produce a certified optimum."""
    pass


class MaxItersError(SolverError):
    """No convergence within the iteration budget."""
    pass


class NumericalFailureError(SolverError):
    """Factorization breakdown inside the solver."""
    pass


class SamplerExhaustedError(NpaBoundaryError):
    """Rejection sampling or root-finding ran out of its retry budget."""
    pass


class OnsetNotFoundError(NpaBoundaryError):
    """No sign change of the deviation inside the bisection bracket."""
    pass


class OutputError(NpaBoundaryError):
    """Failure while writing CSV or SVG output."""
    pass


class EmptyOutputError(OutputError):
    """Nothing to write."""
    pass


class UsageError(NpaBoundaryError):
    """Malformed command-line input."""
    pass
