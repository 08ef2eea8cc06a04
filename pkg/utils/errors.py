"""
Exception hierarchy for the semigroup contour-quadrature toolkit.
"""


class SemigroupError(Exception):
    """Base class for all toolkit errors"""


class ConfigError(SemigroupError):
    """Experiment configuration is missing keys or inconsistent"""


class DomainError(SemigroupError, ValueError):
    """A numeric argument lies outside its admissible range"""


class SolverError(SemigroupError):
    """A shifted linear system could not be solved"""

    def __init__(self, message: str, z: complex = None):
        super().__init__(message if z is None else f"{message} (z = {z})")
        self.z = z


class PlanInfeasibleError(SemigroupError):
    """No quadrature plan satisfies the requested accuracy"""


class SymmetryError(SemigroupError):
    """The assembled sum carries an imaginary part that should be zero"""
