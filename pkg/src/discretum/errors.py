"""Exception and warning types shared across discretum."""


class DiscretumError(ValueError):
    """Base class for all discretum input/validation errors."""


class DegenerateBasisError(DiscretumError):
    """Raised when lattice basis vectors are collinear/coplanar."""


class SubRestMassError(DiscretumError):
    """Raised when an energy bound lies below the particle rest energy."""


class StabilityWarning(UserWarning):
    """Emitted when an integrator step size is at or beyond its stable range."""
