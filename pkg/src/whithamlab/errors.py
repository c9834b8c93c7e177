"""Exception types raised across the package."""


class WhithamLabError(Exception):
    """Base class for package-specific failures."""


class DomainError(WhithamLabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedOrderError(DomainError):
    """A derivative order beyond the implemented range was requested."""


class NoStationaryPointError(WhithamLabError, ValueError):
    """The requested group velocity is not attained by the symbol."""


class BandOutOfLatticeError(WhithamLabError, ValueError):
    """A dyadic band lies entirely above the grid's Nyquist frequency."""


class GridMismatchError(WhithamLabError, ValueError):
    """Two fields that must share a grid do not."""


class WraparoundError(WhithamLabError, ValueError):
    """A requested time exceeds the periodic domain's guard time."""


class NearSingularDenominatorError(WhithamLabError, ValueError):
    """A quotient denominator in the gradient decomposition is below guard."""


class InfeasibleSampleError(WhithamLabError, ValueError):
    """A constrained frequency sample cannot be placed in its band."""


class DegenerateBoxError(WhithamLabError, ValueError):
    """A scan box has nonpositive extent."""


class NonDecayedEdgeError(WhithamLabError, ValueError):
    """A sampled multiplier does not decay at the box edge (aliasing risk)."""


class MemoryBudgetError(WhithamLabError, ValueError):
    """A dense multiplier would exceed the configured memory budget."""


class BlowupError(WhithamLabError, RuntimeError):
    """The solution exceeded the amplitude ceiling or became non-finite."""


class NonMonotoneTimeError(WhithamLabError, ValueError):
    """Phase accumulation was asked to step backwards in time."""


class StepControlError(WhithamLabError, ValueError):
    """Time samples are too sparse for the phase quadrature tolerance."""


class ConfigError(WhithamLabError, ValueError):
    """A run configuration file is malformed or contains unknown keys."""
