"""Exception hierarchy shared by every module."""


class BlochLabError(Exception):
    """Base class for all errors raised by blochlab."""


class ValidationError(BlochLabError, ValueError):
    """Input violates a documented precondition (shape, membership, Hermitian...)."""


class SingularityError(BlochLabError, ArithmeticError):
    """A pole, branch point or singular matrix was met during evaluation."""


class ExprDomainError(SingularityError):
    """An elementary function was evaluated outside its domain (e.g. log(0))."""


class UnsupportedError(BlochLabError, NotImplementedError):
    """The requested quantity has no implementation for this domain."""


class ClassificationRequired(BlochLabError):
    """A spectrum was requested for a symbol whose class is unknown."""
