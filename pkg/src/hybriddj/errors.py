"""Exception hierarchy shared by all simulator modules."""


class HybridDJError(Exception):
    """Base class for every error raised by the package."""


class GridError(HybridDJError, ValueError):
    """Invalid grid, out-of-range coordinate, or mismatched grids."""


class ResolutionError(HybridDJError, ValueError):
    """A Gaussian is not resolved by the grid it is sampled on."""


class PromiseViolation(HybridDJError, ValueError):
    """A function is neither constant nor balanced, or contradicts its label."""

    def __init__(self, message, ones=None):
        super().__init__(message)
        self.ones = ones


class StateError(HybridDJError, ValueError):
    """A register is not in the state an operation requires."""


class ConfigError(HybridDJError, ValueError):
    """Malformed or inconsistent experiment configuration."""


class NumericalError(HybridDJError, ArithmeticError):
    """A numerical routine failed to reach its target accuracy."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge."""

    def __init__(self, message, value=float("nan"), abserr=float("nan")):
        super().__init__(message)
        self.value = value
        self.abserr = abserr


class StageError(HybridDJError):
    """Wraps an error raised inside one stage of an experiment pipeline."""

    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
