"""Exception hierarchy shared by all lateralcp modules."""

from __future__ import annotations


class LateralCPError(Exception):
    """Base class for every error raised by this package."""


class DomainError(LateralCPError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ConvergenceError(LateralCPError, ArithmeticError):
    """An iterative routine exhausted its evaluation budget before reaching tolerance."""


class NoSignChange(LateralCPError, ValueError):
    """A root was requested but the function does not change sign where it was searched."""


class EmptyProfile(LateralCPError, ValueError):
    """A roughness profile has neither cosine modes nor a sampled grid."""


class OutOfGrid(LateralCPError, ValueError):
    """A sampled profile was evaluated outside its grid."""


class PerturbativityViolation(LateralCPError, ValueError):
    """The corrugation height is too large compared with the particle distance."""


class NullAmplitude(LateralCPError, ValueError):
    """The lateral energy amplitude vanishes, so no phase or minimum is defined."""


class ConfigError(LateralCPError, ValueError):
    """A scenario configuration failed validation."""
