"""Exception hierarchy shared by all wavepole modules."""


class WavepoleError(Exception):
    """Base class for every error raised by the package."""


class ConfigurationError(WavepoleError, ValueError):
    """Invalid grid, window, or matching configuration."""


class DomainError(WavepoleError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class UnsupportedOperation(WavepoleError, TypeError):
    """Operation not defined for this kind of potential (e.g. a separable kernel)."""


class NumericalFailure(WavepoleError, RuntimeError):
    """Root finding or integration did not converge."""


class NodeSingularityError(WavepoleError, ValueError):
    """Ratio requested at (or too close to) a node of the bound-state function."""


class FitError(WavepoleError, ValueError):
    """Least-squares fit is ill-conditioned or the data are unusable."""


class NearPoleError(WavepoleError, ValueError):
    """Evaluation requested too close to an S-matrix pole."""
