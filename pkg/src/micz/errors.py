"""Exception hierarchy shared by all micz modules."""


class MiczError(Exception):
    """Base class for every error raised by this package."""


class OriginPoint(MiczError, ValueError):
    """A position vector is zero where a point of R^3 minus the origin is required."""


class InvalidParams(MiczError, ValueError):
    """Orbit parameters violate a membership invariant.

    ``violations`` holds one ``(invariant, amount)`` pair per failed check,
    where ``amount`` is the size of the violation (None for structural errors).
    """

    def __init__(self, violations):
        self.violations = list(violations)
        text = "; ".join(
            name if amount is None else f"{name} (violated by {amount:.3e})"
            for name, amount in self.violations
        )
        super().__init__(text or "invalid parameters")


class DegenerateOrbit(InvalidParams):
    """L^2 - (L.A)^2 is at or below the slack: a colliding orbit."""


class NonUnitDirection(MiczError, ValueError):
    pass


class InvalidTransform(MiczError, ValueError):
    """A matrix is not an orthochronous Lorentz transformation."""


class SignFlip(MiczError):
    """The group action sent a0 to a non-positive value."""


class WrongClass(MiczError):
    pass


class HyperbolicUnsupported(WrongClass):
    pass


class ClassBoundary(WrongClass):
    """Input is too close to the elliptic/parabolic boundary to canonicalize reliably."""


class StepLimitExceeded(MiczError, RuntimeError):
    pass


class NearCollision(MiczError, RuntimeError):
    pass
