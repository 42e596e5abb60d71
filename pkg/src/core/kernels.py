"""
Kernels
Fundamental solutions of the half-heat equation on ℝ (Poisson kernel G) and on
S¹ (F), their pullbacks to the circle, and the planar Gaussian weight.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from core.report import IdentityReport
from utils.debug_log import debug_log


ArrayLike = Union[float, np.ndarray]

# e^{-tn} < 1e-16 beyond n = ceil(37/t)
SERIES_CUTOFF = 37.0

# Closed form of F printed as (e^{2t}-1)/(e^{2t}-2e^t cosθ+1) equals this
# constant times the series (1/2π) Σ e^{-t|n|} e^{inθ}
F_CLOSED_FORM_SCALE = 2.0 * np.pi


class KernelError(ValueError):
    """Invalid kernel argument (t <= 0)."""


@dataclass
class KernelEval:
    """Kernel value and first derivatives at (t, location)."""
    t: float
    location: ArrayLike
    value: ArrayLike
    d_dt: ArrayLike
    d_dspace: ArrayLike


def _check_t(t: float) -> float:
    t = float(t)
    if not t > 0.0:
        raise KernelError(f"kernel time must be positive, got t={t}")
    return t


def poisson_G(t: float, x: ArrayLike, x0: float = 0.0) -> KernelEval:
    """
    Poisson kernel G(t, x) = (1/π) t / ((x - x0)² + t²) and its derivatives.

    Solves ∂_t G + (-Δ)^{1/2} G = 0 on ℝ with G(0, ·) = δ_{x0}.
    """
    t = _check_t(t)
    y = np.asarray(x, dtype=float) - x0
    r2 = y * y + t * t
    value = t / (np.pi * r2)
    d_dt = (y * y - t * t) / (np.pi * r2 * r2)
    d_dx = -2.0 * y * t / (np.pi * r2 * r2)
    return KernelEval(t, x, value, d_dt, d_dx)


def series_terms(t: float) -> int:
    """Number of retained modes n = 1..n_max of the F series."""
    return int(np.ceil(SERIES_CUTOFF / _check_t(t)))


def circle_F_coefficients(t: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Fourier coefficients of F(t, ·) and ∂_tF(t, ·) on the retained band.

    Returns:
        (n, f_n, d_dt f_n) with n = -n_max..n_max.
    """
    t = _check_t(t)
    n_max = series_terms(t)
    n = np.arange(-n_max, n_max + 1)
    f = np.exp(-t * np.abs(n)) / (2.0 * np.pi)
    return n, f, -np.abs(n) * f


def circle_F(t: float, theta: ArrayLike, theta0: float = 0.0,
             band: Optional[int] = None) -> KernelEval:
    """
    F(t, θ) = (1/2π) Σ_n e^{-t|n|} e^{in(θ-θ0)} by truncated series.

    band caps the retained modes (|n| <= band), e.g. below the Nyquist mode
    of a grid the fields are integrated against.

    Example:
        >>> circle_F(1.0, 0.0).value    # (1/2π)(e+1)/(e-1)
    """
    t = _check_t(t)
    psi = np.asarray(theta, dtype=float) - theta0
    n_max = series_terms(t) if band is None else min(series_terms(t), band)
    n = np.arange(1, n_max + 1, dtype=float)
    decay = np.exp(-t * n)

    phase = np.multiply.outer(psi, n)
    cos_part = np.cos(phase)
    sin_part = np.sin(phase)

    value = (1.0 + 2.0 * (cos_part @ decay)) / (2.0 * np.pi)
    d_dt = -2.0 * (cos_part @ (n * decay)) / (2.0 * np.pi)
    d_dtheta = -2.0 * (sin_part @ (n * decay)) / (2.0 * np.pi)

    debug_log.log_operator("circle_F", {'t': t, 'terms': n.size, 'points': np.size(psi)})
    return KernelEval(t, theta, value, d_dt, d_dtheta)


def circle_F_closed_raw(t: float, theta: ArrayLike, theta0: float = 0.0) -> KernelEval:
    """
    Closed form (e^{2t}-1)/(e^{2t}-2e^t cos θ+1) with its t- and θ-derivatives.

    Written in q = e^{-t} to stay finite for large t. Equals F_CLOSED_FORM_SCALE
    times circle_F.
    """
    t = _check_t(t)
    psi = np.asarray(theta, dtype=float) - theta0
    q = np.exp(-t)
    c = np.cos(psi)
    den = 1.0 - 2.0 * q * c + q * q
    num = 1.0 - q * q

    value = num / den
    d_dq = (-2.0 * q * den - num * (2.0 * q - 2.0 * c)) / (den * den)
    d_dt = -q * d_dq
    d_dtheta = -num * 2.0 * q * np.sin(psi) / (den * den)
    return KernelEval(t, theta, value, d_dt, d_dtheta)


def circle_F_closed(t: float, theta: ArrayLike, theta0: float = 0.0) -> KernelEval:
    """Closed form normalized to agree with the series definition of F."""
    raw = circle_F_closed_raw(t, theta, theta0)
    return KernelEval(t, theta,
                      raw.value / F_CLOSED_FORM_SCALE,
                      raw.d_dt / F_CLOSED_FORM_SCALE,
                      raw.d_dspace / F_CLOSED_FORM_SCALE)


def _pullback_denominator(t: float, s: np.ndarray, c: np.ndarray, x0: float) -> np.ndarray:
    # ((x - x0)² + t²)(1 + sin θ) for x = cos θ / (1 + sin θ)
    return (1.0 - s) - 2.0 * x0 * c + (x0 * x0 + t * t) * (1.0 + s)


def pulled_back_G(t: float, theta: ArrayLike, x0: float = 0.0) -> KernelEval:
    """
    G and its derivatives at the stereographic image x = cos θ / (1 + sin θ).

    Smooth on the whole circle; all three vanish at the pole θ = -π/2.
    """
    t = _check_t(t)
    theta = np.asarray(theta, dtype=float)
    s = np.sin(theta)
    c = np.cos(theta)
    D = _pullback_denominator(t, s, c, x0)

    value = t * (1.0 + s) / (np.pi * D)
    d_dt = -(2.0 * t * t * (1.0 + s) - D) * (1.0 + s) / (np.pi * D * D)
    d_dx = -2.0 * t * (c - x0 * (1.0 + s)) * (1.0 + s) / (np.pi * D * D)
    return KernelEval(t, theta, value, d_dt, d_dx)


def pulled_back_G_weighted(t: float, theta: ArrayLike,
                           x0: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """
    ∂_tG(t, P(θ))·|P'(θ)| and ∂_xG(t, P(θ))·|P'(θ)| with |P'(θ)| = 1/(1 + sin θ).

    These are the line integrands after the substitution x = P(θ); both are
    smooth on S¹, so the uniform rule integrates them spectrally.
    """
    t = _check_t(t)
    theta = np.asarray(theta, dtype=float)
    s = np.sin(theta)
    c = np.cos(theta)
    D = _pullback_denominator(t, s, c, x0)

    d_dt_w = (D - 2.0 * t * t * (1.0 + s)) / (np.pi * D * D)
    d_dx_w = -2.0 * t * (c - x0 * (1.0 + s)) / (np.pi * D * D)
    return d_dt_w, d_dx_w


def gaussian_weight(t: float, x: np.ndarray, x0=(0.0, 0.0)) -> np.ndarray:
    """
    Exponential factor e^{-|x - x0|²/4t} of the planar heat kernel.

    The normalization constant is left out; the planar identities are
    homogeneous in the weight.
    """
    t = _check_t(t)
    d = np.asarray(x, dtype=float) - np.asarray(x0, dtype=float)
    return np.exp(-np.sum(d * d, axis=-1) / (4.0 * t))


def kernel_agreement(t: float, n_points: int = 512, tol: float = 1e-12) -> IdentityReport:
    """
    Series against normalized closed form of F on a uniform grid: value, ∂_t
    and ∂_θ, as a single report with the worst sup-norm gap.
    """
    theta = 2.0 * np.pi * np.arange(n_points) / n_points
    series = circle_F(t, theta)
    closed = circle_F_closed(t, theta)
    gap = max(float(np.max(np.abs(a - b))) for a, b in (
        (series.value, closed.value),
        (series.d_dt, closed.d_dt),
        (series.d_dspace, closed.d_dspace),
    ))
    size = max(float(np.max(np.abs(f))) for f in (closed.value, closed.d_dt, closed.d_dspace))
    params = {'t': float(t), 'points': n_points, 'scale_constant': F_CLOSED_FORM_SCALE}
    lhs = max(float(np.max(np.abs(f))) for f in (series.value, series.d_dt, series.d_dspace))
    return IdentityReport.compare("kernel_agreement", params, lhs, size, tol, scale=size, abs_gap=gap)
