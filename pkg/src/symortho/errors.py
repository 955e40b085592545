"""Exception hierarchy shared by all modules."""


class SymorthoError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(SymorthoError, ValueError):
    """Array has the wrong shape or the operands do not conform."""


class NotHermitianError(SymorthoError, ValueError):
    pass


class NumericalError(SymorthoError, ArithmeticError):
    """A computation produced a result the mathematics rules out.

    Raised for eigensolver non-convergence, large negative values of
    quantities that are provably non-negative, and similar failures.
    """


class NotPositiveDefiniteError(SymorthoError, ValueError):
    """A Gram (or other Hermitian) matrix is not positive definite.

    For a Gram matrix this means the underlying vectors are linearly
    dependent. ``lambda_min`` and ``condition`` are kept for reporting;
    ``condition`` is ``inf`` when the smallest eigenvalue is not positive.
    """

    def __init__(self, message, lambda_min=None, condition=None):
        super().__init__(message)
        self.lambda_min = lambda_min
        self.condition = condition


class IllConditionedError(NotPositiveDefiniteError):
    """Condition number exceeds the hard limit for orthonormalization."""


class UnsupportedRepresentationError(SymorthoError, TypeError):
    """Operation needs coordinates but the family is known only by its Gram."""


class PreconditionError(SymorthoError, ValueError):
    """A hypothesis of a bound or theorem does not hold for the inputs."""
