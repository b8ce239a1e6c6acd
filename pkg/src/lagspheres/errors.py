"""Exception types raised by the engine."""


class DomainError(ValueError):
    """Input outside the domain of an operation (off-manifold, bad chart point)."""


class PoleBandError(DomainError):
    """Finite-difference evaluation requested too close to a pole of the sphere."""


class DegenerateMetricError(ArithmeticError):
    """The induced metric is singular (or not finite) at an evaluation point."""
