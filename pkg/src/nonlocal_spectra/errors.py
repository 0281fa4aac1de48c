"""Exception types shared across the package.

Exit-code policy for the CLI: configuration problems map to 1, numerical
tolerance breaches to 2, and violations of theory preconditions (e.g. asking
for a zero-coupling resolvent of a recurrent walk) to 3.
"""


class NonlocalSpectraError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class InvalidParameterError(NonlocalSpectraError, ValueError):
    """A constructor argument is outside its admissible range."""

    exit_code = 1


class PositivityViolationError(InvalidParameterError):
    """Requested parameters would produce a signed (non-density) kernel."""


class ConstructionFailureError(NonlocalSpectraError):
    """Numerical construction produced values violating its contract."""


class TruncationError(NonlocalSpectraError):
    """A truncated domain was too small for the requested accuracy."""


class DomainTooSmallError(NonlocalSpectraError):
    """Grid does not contain the mass of a computed function."""

    def __init__(self, message, first_failing_n=None):
        super().__init__(message)
        self.first_failing_n = first_failing_n


class RecurrentResolventError(NonlocalSpectraError):
    """Zero-coupling resolvent requested for a recurrent walk."""

    exit_code = 3


class ResolutionError(NonlocalSpectraError):
    """Requested feature is unresolvable on the supplied grid."""


class IterationLimitError(NonlocalSpectraError):
    """An iterative solver hit its iteration cap before converging."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class TiltOutOfRangeError(NonlocalSpectraError):
    """Exponential tilt outside the strip where the moment integral exists."""

    exit_code = 3


class HullViolationError(NonlocalSpectraError):
    """Momentum argument outside the admissible convex hull."""

    exit_code = 3


class SolverStagnationError(NonlocalSpectraError):
    """Root finder stopped making progress."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class PhaseSolverError(NonlocalSpectraError):
    """Bracketing of the phase minimum failed."""

    def __init__(self, message, sampled_profile=None):
        super().__init__(message)
        self.sampled_profile = sampled_profile


class WindowTooShortError(NonlocalSpectraError):
    """Front trace does not cover the exponential-growth window."""


class ContractionViolatedError(NonlocalSpectraError):
    """Neumann series requested although the contraction bound is >= 1."""

    exit_code = 3


class NumericalPositivityError(NonlocalSpectraError):
    """A quantity that must stay positive went negative beyond tolerance."""


class DomainExhaustedError(NonlocalSpectraError):
    """The simulated front reached the guarded boundary zone."""

    def __init__(self, message, time_of_failure=None):
        super().__init__(message)
        self.time_of_failure = time_of_failure


class ToleranceBreachError(NonlocalSpectraError):
    """An oracle comparison exceeded its stated tolerance."""

    exit_code = 2


class ConfigError(NonlocalSpectraError):
    """Configuration file failed validation."""

    exit_code = 1

    def __init__(self, message, field_path=None):
        super().__init__(message)
        self.field_path = field_path


class DependencyError(ConfigError):
    """A command was invoked without its required upstream result."""
