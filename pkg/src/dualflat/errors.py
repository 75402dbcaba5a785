"""Exception taxonomy shared across the package."""


class DualFlatError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(DualFlatError):
    """A family, sampler, or run was configured with inconsistent constants."""


class DomainError(DualFlatError):
    """A coordinate vector or parameter lies outside its open domain."""


class ConvergenceError(DualFlatError):
    """An iterative solver failed to reach its tolerance."""


class ConditioningError(DualFlatError):
    """A matrix failed symmetry or positive-definiteness at working precision."""


class UnsupportedError(DualFlatError):
    """The requested operation is not defined for this family."""


class QuadratureError(DualFlatError):
    """A quadrature node left the coordinate domain."""


class SamplingExhausted(DualFlatError):
    """A randomized construction failed too many consecutive resamples."""


class NonnegativityError(DualFlatError):
    """A provably nonnegative quantity came out negative beyond rounding slack."""


class MonotonicityError(DualFlatError):
    """A provably nondecreasing profile decreased beyond rounding slack."""
