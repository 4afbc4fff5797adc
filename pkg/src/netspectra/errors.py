"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: configuration problems exit 2, data
problems (unreadable or malformed inputs) exit 3, numeric failures exit 4.
"""


class NetspectraError(Exception):
    """Base class for all package errors."""


class ConfigError(NetspectraError):
    """Invalid configuration or experiment description."""


class DomainError(NetspectraError, ValueError):
    """A parameter is outside its mathematical domain."""


class EdgeListError(NetspectraError):
    """Malformed edge-list input; message names the offending line."""


class GridMismatchError(NetspectraError):
    """Two densities do not share the same grid; re-estimate on a common one."""


class NumericError(NetspectraError):
    """A numeric routine failed (e.g. eigensolver non-convergence)."""


class NoFeasibleModelError(NetspectraError):
    """Every candidate model yielded an infinite divergence."""
