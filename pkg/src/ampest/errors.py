"""Exception types shared across the package."""


class AmpestError(Exception):
    """Base class for all package-specific errors."""


class DomainError(AmpestError, ValueError):
    """An argument fell outside its mathematical domain."""


class ConstructionFailed(AmpestError):
    """A polynomial failed its certificate even at the degree cap."""


class KindMismatch(AmpestError):
    """A sampler was handed a polynomial of the wrong kind."""


class MonotonicityViolated(AmpestError):
    """Interval inversion was attempted across an extremum."""


class PreconditionViolated(AmpestError):
    """A construction precondition does not hold for the given parameters."""


class IterationCap(AmpestError):
    """A safety cap on loop iterations was hit; signals mis-configuration."""


class DegenerateLikelihood(AmpestError):
    """Every round of a likelihood fit returned all heads or all tails."""


class InsufficientData(AmpestError):
    """A model fit was requested on a sweep with too few runs per cell."""
