"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of the requested quantity."""


class NumericalError(ArithmeticError):
    """A numerical procedure (quadrature, root finding, null space) failed."""


class NoRootError(NumericalError):
    pass


class OptimizationError(NumericalError):
    pass


class InsufficientPointsError(ValueError):
    """Too few admissible points to build a frontier."""
