"""
Quadrature Oracles
Independent high-precision evaluations used to cross-check the spectral
verifiers. Double-exponential (tanh-sinh) quadrature from mpmath.
"""

from typing import Callable, Sequence, Tuple

import mpmath
import numpy as np

from core.kernels import poisson_G
from utils.debug_log import debug_log


# The line integrals are truncated to |x - x0| <= LINE_CUTOFF
LINE_CUTOFF = 1e6

_BREAKPOINTS = (-100.0, -10.0, -1.0, 0.0, 1.0, 10.0, 100.0)


def line_pohozaev_oracle(u: Callable[[float], np.ndarray], u0: Sequence[float], t: float,
                         x0: float = 0.0, cutoff: float = LINE_CUTOFF,
                         dps: int = 20) -> Tuple[np.ndarray, np.ndarray]:
    """
    ∫ ∂_tG(t, x)(u(x) - u0) dx and ∫ ∂_xG(t, x)(u(x) - u0) dx over |x - x0| <= cutoff.

    Args:
        u: Map ℝ → ℝ^m evaluated at a float
        u0: Value of u at infinity
        t: Kernel time
        x0: Kernel centre
        cutoff: Truncation half-width
        dps: Working decimal precision of the quadrature

    Returns:
        (I_t, I_x) as float arrays of length m.
    """
    u0 = np.asarray(u0, dtype=float)
    m = u0.size
    points = [x0 - cutoff] + [x0 + p for p in _BREAKPOINTS] + [x0 + cutoff]

    def integrand(which: str, comp: int):
        def f(x):
            xf = float(x)
            k = poisson_G(t, xf, x0)
            weight = k.d_dt if which == 't' else k.d_dspace
            return mpmath.mpf(float(weight) * float(np.asarray(u(xf))[comp] - u0[comp]))
        return f

    I_t = np.zeros(m)
    I_x = np.zeros(m)
    with mpmath.workdps(dps):
        for comp in range(m):
            I_t[comp] = float(mpmath.quad(integrand('t', comp), points))
            I_x[comp] = float(mpmath.quad(integrand('x', comp), points))

    debug_log.log_operator("line_pohozaev_oracle", {'t': t, 'x0': x0, 'm': m})
    return I_t, I_x
