"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: validation problems exit with 2,
numerical failures with 3, I/O errors with 4.
"""


class ChiralKerrError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(ChiralKerrError, ValueError):
    """A domain precondition or configuration invariant was violated."""


class ConfigError(ValidationError):
    """A configuration file failed to parse or validate."""


class NumericalError(ChiralKerrError, RuntimeError):
    """A numerical routine failed to produce a trustworthy result."""


class DegenerateSteadyStateError(NumericalError):
    """The Liouvillian null space is not one-dimensional."""


class PhysicsViolationError(NumericalError):
    """A computed quantity violates a physical invariant (e.g. optical gain)."""
