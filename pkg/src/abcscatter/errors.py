"""Exception hierarchy.

Two families matter to callers: ``InvalidInput`` (a precondition was
violated; the CLI maps it to exit status 2) and ``ConvergenceError`` (a
numerical procedure failed to reach its tolerance; exit status 3).
"""


class ScatteringError(Exception):
    """Base class for all package errors."""


class InvalidInput(ScatteringError, ValueError):
    pass


class PoleError(InvalidInput):
    """Gamma function evaluated at a non-positive integer."""


class SubThresholdError(InvalidInput):
    """Energy at or below the rest energy; no scattering states."""


class CriticalChannelError(InvalidInput):
    """(j + nu)^2 == gamma^2: indicial exponent vanishes, case undefined."""


class ChannelKindError(InvalidInput):
    """Channel routed to the wrong S-matrix prescription."""


class ForwardAngleError(InvalidInput):
    """Angle too close to the forward direction."""


class ConvergenceError(ScatteringError, ArithmeticError):
    """Numerical procedure did not reach its tolerance.

    ``residual`` carries the last error estimate when one is available.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SpecialFunctionOverflow(ConvergenceError, OverflowError):
    pass


class QualityWarning(UserWarning):
    """Result computed, but outside the regime where it is reliable."""
