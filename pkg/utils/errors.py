class GgbmError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GgbmError, ValueError):
    """Argument outside the documented domain of an operation."""


class ConvergenceError(GgbmError, ArithmeticError):
    """No evaluation method reached its tolerance."""


class QuadratureError(ConvergenceError):
    """Adaptive quadrature ran out of subdivisions before meeting its tolerance."""


class InsufficientPointsError(GgbmError, ValueError):
    pass


class DimensionMismatchError(GgbmError, ValueError):
    pass


class SimulationError(GgbmError, RuntimeError):
    pass


class ContainerError(GgbmError, IOError):
    """Malformed ensemble file (magic, version or payload size)."""
