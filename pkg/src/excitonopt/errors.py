"""Exception and warning types shared across the package."""


class ExcitonOptError(Exception):
    """Base class for all errors raised by excitonopt."""


class ValidationError(ExcitonOptError, ValueError):
    """Invalid physical parameters. ``fields`` names the offending entries."""

    def __init__(self, message, fields=()):
        super().__init__(message)
        self.fields = tuple(fields)


class ConfigError(ExcitonOptError):
    """Malformed configuration file or unknown option."""


class ConvergenceError(ExcitonOptError):
    """Self-consistent mean-field iteration did not converge.

    The last iterate is kept on ``last`` so callers can inspect it.
    """

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class StabilityError(ExcitonOptError):
    """A steady state was requested for an unstable drift matrix."""


class NumericalError(ExcitonOptError):
    """A linear-algebra routine failed or produced an inaccurate result."""


class ParameterWarning(UserWarning):
    """Base class for non-fatal parameter diagnostics."""


class IonizationWarning(ParameterWarning):
    """Thermal energy exceeds the exciton binding energy."""


class SidebandWarning(ParameterWarning):
    """Exciton linewidth is not small compared to the mechanical frequency."""
