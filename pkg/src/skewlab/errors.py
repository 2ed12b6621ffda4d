"""Exception hierarchy shared by all skewlab modules."""


class SkewlabError(Exception):
    """Base class for every error raised by skewlab."""


class DimensionError(SkewlabError, ValueError):
    """Operands are not square or their dimensions disagree."""


class NotHermitianError(SkewlabError, ValueError):
    pass


class InvalidStateError(SkewlabError, ValueError):
    """A matrix failed density-operator validation (trace, positivity)."""


class EigenFloorError(SkewlabError, ValueError):
    """A negative or fractional power was requested of a singular spectrum."""


class ConvergenceError(SkewlabError, ArithmeticError):
    """The eigensolver did not converge within its sweep budget."""


class NumericalError(SkewlabError, ArithmeticError):
    """A quantity that must be nonnegative came out clearly negative."""
