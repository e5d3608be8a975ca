"""Exception hierarchy.

Two families: :class:`InvalidInputError` for problems with what the caller
passed in, :class:`NumericalError` for computations that cannot produce a
trustworthy number (singular Gram matrices, optimizer trouble, ...).  The CLI
maps the first family to exit code 1 and the second to exit code 2.
"""


class GAngleError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(GAngleError, ValueError):
    """An argument is malformed: non-finite coordinates, bad config, ..."""


class UndefinedDirectionError(InvalidInputError):
    """One-sided derivatives of the norm were requested at the zero vector."""


class InvalidSubspaceError(InvalidInputError):
    """A basis that must be linearly independent is not."""


class NumericalError(GAngleError, ArithmeticError):
    """A computation could not be carried out reliably."""


class LimitEstimationError(NumericalError):
    """Difference quotients did not stabilize over the configured steps."""


class SingularGramError(NumericalError):
    """The Gram determinant det[g(x_i, x_k)] vanishes (relative to scale)."""

    def __init__(self, msg, gamma=None):
        super().__init__(msg)
        self.gamma = gamma


class OrthonormalizationError(NumericalError):
    """Left g-orthonormalization broke down at a specific input index."""

    def __init__(self, msg, index):
        super().__init__(msg)
        self.index = index


class DegenerateSubspaceError(NumericalError):
    """Every basis direction tried for a subspace was degenerate."""


class OptimizerInconsistencyError(NumericalError):
    """Sup estimates are mutually inconsistent, e.g. a cosine above one.

    Usually means the denominator sup was under-resolved; raising the sample
    count of the optimizer is the first thing to try.
    """
