"""Exception hierarchy shared by all modules."""


class IdententError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(IdententError, ValueError):
    """Input violates a documented precondition."""


class DimensionError(ValidationError):
    """Operand shapes are incompatible."""


class DegenerateInputError(ValidationError):
    """Input is well formed but describes no admissible object.

    Raised for instance when antisymmetrizing two parallel vectors, which
    would produce the zero vector.
    """


class NumericalError(IdententError, ArithmeticError):
    """A numerical routine failed to deliver a certified result."""


class ConvergenceError(NumericalError):
    pass


class CertificationError(NumericalError):
    """A factorization residual exceeded its tolerance."""


class ConsistencyError(NumericalError):
    """An internal structural property failed to hold (e.g. a nonzero
    singular value of an antisymmetric matrix with odd multiplicity)."""
