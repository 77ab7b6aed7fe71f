"""Exception types raised across iplab."""


class IplabError(Exception):
    """Base class for all iplab errors."""


class InvalidIntervalError(IplabError, ValueError):
    pass


class UnsupportedOrderError(IplabError, ValueError):
    pass


class QuadratureError(IplabError, ArithmeticError):
    """Adaptive quadrature failed to reach its tolerance.

    The best estimate and the achieved error bound are attached so callers
    can decide whether the partial result is usable.
    """

    def __init__(self, message, estimate=None, residual=None):
        super().__init__(message)
        self.estimate = estimate
        self.residual = residual


class OrderCapError(IplabError, ValueError):
    pass


class NoClosedFormError(IplabError):
    """The adjoint series neither terminated nor closed within the order cap.

    ``powers`` holds the computed adjoint powers so the truncated series can
    still be used.
    """

    def __init__(self, message, powers=None):
        super().__init__(message)
        self.powers = powers or []


class NotFirstOrderError(IplabError):
    pass


class ConfigurationError(IplabError, ValueError):
    pass


class SupportOutOfDomainError(IplabError, ValueError):
    pass


class UndefinedMomentError(IplabError, ZeroDivisionError):
    pass


class GridMismatchError(IplabError, ValueError):
    pass
