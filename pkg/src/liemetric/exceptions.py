"""Exception hierarchy for liemetric."""


class LieMetricError(Exception):
    """Base class for all liemetric errors."""


class InvalidDimensionError(LieMetricError, ValueError):
    """A dimension argument is out of range (e.g. d < 2)."""


class DimensionCapError(LieMetricError):
    """A requested construction exceeds the configured dimension cap."""

    def __init__(self, dim, cap, what="Hilbert space"):
        self.dim = dim
        self.cap = cap
        super().__init__(f"{what} dimension {dim} exceeds cap {cap}")


class ValidationError(LieMetricError, ValueError):
    """An object violates one of its structural invariants."""


class NormalizationError(ValidationError):
    """A vector or weight list that must be normalized is not."""


class OrthogonalityError(ValidationError):
    """Two vectors that must be orthogonal are not."""


class RegimeError(LieMetricError, ValueError):
    """A parameter is outside the validity regime of an approximation."""


class UndefinedIncompatibilityError(LieMetricError):
    """The incompatibility parameter is undefined (information matrix is zero)."""


class AlgebraMembershipError(LieMetricError):
    """A unitary is not generated by the algebra of the given basis."""


class NumericalError(LieMetricError):
    """A numerical guarantee (PSD-ness, spectral structure, ...) failed."""


class ConfigError(LieMetricError, ValueError):
    """A job configuration is malformed."""
