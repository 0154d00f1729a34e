"""Exception types shared by the kinematics, geometry and transport modules."""


class DomainError(ValueError):
    """Input outside the domain of an operation (superluminal speed, off-shell momentum, ...)."""


class SingularChartError(DomainError):
    """Point lies on a locus where the spherical chart (rho, theta, phi) breaks down."""


class ConsistencyError(ArithmeticError):
    """A result violates a structural identity it must satisfy by construction.

    Raised, for example, when a composition of boosts that should be a pure
    rotation carries a boost residue above tolerance.
    """
