"""Exception hierarchy shared by the solver modules."""

from __future__ import annotations


class GFWenoError(Exception):
    """Base class for all errors raised by :mod:`gfweno`."""


class ConfigurationError(GFWenoError, ValueError):
    pass


class DomainError(GFWenoError, ValueError):
    """A state outside the admissible set (e.g. non-positive depth)."""


class SonicStateError(GFWenoError):
    """Eigenvalues coincide or vanish where a regular state is required."""


class NoRootError(GFWenoError):
    """Flux inversion target is not attainable on the requested branch.

    ``gap`` is the distance between the target and the sonic minimum.
    """

    def __init__(self, message: str, gap: float = float("nan")) -> None:
        super().__init__(message)
        self.gap = gap


class SingularJumpError(GFWenoError):
    pass


class InadmissibleJumpError(GFWenoError):
    pass


class IterationError(GFWenoError):
    def __init__(self, message: str, residual: float = float("nan")) -> None:
        super().__init__(message)
        self.residual = residual


class BlowUpError(GFWenoError):
    def __init__(self, message: str, stage: int = -1) -> None:
        super().__init__(message)
        self.stage = stage


class DivergenceError(GFWenoError):
    pass


class UsageError(GFWenoError, ValueError):
    pass
