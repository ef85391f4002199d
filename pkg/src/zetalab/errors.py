"""Exception hierarchy shared by every module.

Each error records the module and operation that raised it so the CLI can
report the failing stage and map it onto an exit code.
"""


class ZetaLabError(Exception):
    """Base class. ``module``/``operation`` identify the failing stage."""

    exit_code = 3

    def __init__(self, message, module="", operation=""):
        super().__init__(message)
        self.module = module
        self.operation = operation

    def __str__(self):
        where = ".".join(x for x in (self.module, self.operation) if x)
        msg = super().__str__()
        return f"[{where}] {msg}" if where else msg


class ConfigError(ZetaLabError, ValueError):
    """Invalid parameters or configuration."""

    exit_code = 2


class RangeError(ConfigError):
    """Arguments outside the supported evaluation window."""


class InsufficientTableError(ConfigError):
    """A prime table is too short for the requested cutoff."""


class QuadratureError(ZetaLabError):
    """Quadrature did not converge; ``best`` holds the last estimate."""

    def __init__(self, message, best=None, err=None, module="", operation=""):
        super().__init__(message, module, operation)
        self.best = best
        self.err = err


class NearZeroError(ZetaLabError):
    """|zeta| (or |zeta - a|) fell below the safety floor on a path."""

    def __init__(self, message, point=None, module="", operation=""):
        super().__init__(message, module, operation)
        self.point = point


class OnContourRootError(NearZeroError):
    """An a-point sits on (or numerically at) a counting contour."""


class DegenerateError(ZetaLabError):
    """A sample window or restriction discarded too much data."""


class CacheError(ZetaLabError):
    """Sample cache file is corrupt or does not match its header."""


class AcceptanceFailure(ZetaLabError):
    exit_code = 4


class ConvergenceError(ZetaLabError):
    """An iterative solver stopped without meeting its tolerance."""
