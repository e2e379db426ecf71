from typing import Optional


class BrokenStickError(Exception):
    """Base class for every error raised by the package."""


class ModelDomainError(BrokenStickError, ValueError):
    """A point or triple lies outside the model triangle."""


class NoTriangleError(BrokenStickError, ValueError):
    """An element triple admits no triangle."""


class NoUniqueConstructionError(NoTriangleError):
    """Cevian triple is not strictly ordered h < w < m."""


class ClassificationError(BrokenStickError):
    """An acute-only quantity was requested for a non-acute triangle."""


class RootBracketError(BrokenStickError, RuntimeError):
    """A cubic had no sign change on the bracket its derivation guarantees."""


class IterationError(BrokenStickError, RuntimeError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (residual={residual:.3e}, iterations={iterations})")
        self.residual = residual
        self.iterations = iterations


class NoClosedFormError(BrokenStickError, LookupError):
    """The event has no exact expression."""


class NoQuadratureError(BrokenStickError, LookupError):
    """The event has no one-dimensional integral representation."""


class ToleranceNotMetError(BrokenStickError, RuntimeError):
    """Quadrature finished with an error estimate above its target."""

    def __init__(self, message: str, achieved: float, target: Optional[float] = None):
        detail = f"achieved={achieved:.3e}"
        if target is not None:
            detail += f", target={target:.3e}"
        super().__init__(f"{message} ({detail})")
        self.achieved = achieved
        self.target = target


class ConfigError(BrokenStickError, ValueError):
    """Invalid command line or configuration file input."""
