"""Exception types raised by the toolkit."""


class OtsfdError(Exception):
    """Base class for all toolkit errors."""


class ConfigurationError(OtsfdError):
    """Invalid combination of options (e.g. correction on without derivatives)."""


class MissingDerivativeError(ConfigurationError):
    """A correction term needs a derivative the source bundle does not supply."""


class InsufficientGhostError(OtsfdError):
    """Stencil reaches beyond the declared ghost width."""


class CFLViolationError(OtsfdError):
    """Advective time step exceeds the CFL bound."""


class StabilityViolationError(OtsfdError):
    """Time step exceeds the stability bound of an explicit scheme."""


class NoPositiveRootError(OtsfdError):
    """Leading-error polynomial has no positive time-step root (alpha/beta <= 0)."""


class UnresolvedBoundaryError(OtsfdError):
    """Grid too coarse to resolve the implicit boundary."""


class DegenerateDomainError(OtsfdError):
    """Implicit domain contains no interior nodes."""


class NoSignChangeError(OtsfdError):
    """Level-set values do not change sign along the probed edge."""


class NotEnoughInteriorPointsError(OtsfdError):
    """Edge-ghost extrapolation cannot find enough collinear interior nodes."""


class GhostFillOrderError(OtsfdError):
    """Corner ghost fill attempted before its edge-ghost dependencies."""


class AnisotropicGridError(OtsfdError):
    """Operation requires dx == dy."""


class RatioMismatchError(OtsfdError):
    """Grid-spacing ratio or time step does not match the optimal-variant contract."""


class ZeroPivotError(OtsfdError):
    """Banded elimination hit a zero pivot (system not diagonally dominant)."""


class IterationLimitError(OtsfdError):
    """Iterative solver failed to reach tolerance within the iteration budget."""
