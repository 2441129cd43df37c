"""Exception hierarchy shared by all modules."""


class ZeroCycleError(Exception):
    """Base class for every error raised by this package."""


class InputError(ZeroCycleError, ValueError):
    """Malformed user input (coefficients, chains, problem files)."""


class InvalidBase(InputError):
    pass


class OutOfRange(InputError):
    pass


class ShapeError(InputError):
    pass


class NotTransitive(ZeroCycleError):
    pass


class CapExceeded(ZeroCycleError):
    """Group closure grew past the configured element cap."""


class NumericFailure(ZeroCycleError):
    """Root continuation or root finding could not be made unambiguous."""


class DegenerateGeometry(NumericFailure):
    """Two numerically close values cannot be told apart with confidence."""


class HypothesisViolated(ZeroCycleError):
    """The non-merging hypothesis fails for some adjacent split of the chain."""


class UnsupportedFactor(ZeroCycleError):
    """A composition factor is neither 2-transitive nor monomial/Chebyshev equivalent."""


class NonConstantBalanced(ZeroCycleError):
    """A balanced chain of a 2-transitive polynomial was not constant."""


class NoSolution(ZeroCycleError):
    pass
