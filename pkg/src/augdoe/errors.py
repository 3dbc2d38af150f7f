"""Exception types shared across the package."""


class AugDoeError(Exception):
    """Base class for all errors raised by augdoe."""


class InvalidInputError(AugDoeError, ValueError):
    """An argument violates an operation's preconditions."""


class InvalidRangeError(InvalidInputError):
    """A (lo, hi) interval with lo > hi, or a value outside its documented bounds."""


class SingularDesignError(AugDoeError, ValueError):
    """The design matrix is not of full column rank.

    ``collinear`` lists the names of the columns that were found to be
    linearly dependent on the columns kept by the pivoted decomposition.
    """

    def __init__(self, message, collinear=()):
        super().__init__(message)
        self.collinear = list(collinear)


class InsufficientDataError(AugDoeError, ValueError):
    """Fewer observations than parameters; no residual degrees of freedom."""


class UndefinedMetricError(AugDoeError, ValueError):
    """A metric was requested over an empty effective set of classes."""
