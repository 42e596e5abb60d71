"""
Warning categories shared by the numerical modules.
"""

import warnings

from utils.debug_log import debug_log


class ResolutionWarning(UserWarning):
    """A result was computed but the grid or quadrature is close to its limit."""


def warn_resolution(msg: str, stacklevel: int = 3) -> None:
    """Emit a ResolutionWarning and mirror it to the debug log."""
    debug_log.warning(msg)
    warnings.warn(msg, ResolutionWarning, stacklevel=stacklevel)
