"""
Conformal Maps
Disk automorphisms restricted to S¹, the stereographic correspondence between
S¹ \\ {-i} and ℝ, and the covariance checks of the half-Laplacian under both.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.kernels import pulled_back_G
from core.report import IdentityReport, residual_field_report
from core.spectral import (
    GridMap1D, analyze, evaluate, fractional_laplacian, synthesize,
    tail_fraction, half_laplacian_samples, theta_grid, SPHERE_TOL,
)
from utils.debug_log import debug_log
from utils.warnings import warn_resolution


# Parameters with |a| beyond this are rejected
MAX_MODULUS = 1.0 - 1e-6

# Input tail share above which precompose treats u as unresolved
RESOLVED_TAIL = 1e-12

# Output tail share above which precompose warns
PRECOMPOSE_TAIL_WARN = 1e-8

# Angular half-width excluded around the pole -i in pullback comparisons
POLE_EXCLUSION = 0.1

UNIT_TOL = 1e-12

# Angles closer than this to -π/2 count as the pole
POLE_TOL = 1e-14


class ConformalError(ValueError):
    """Invalid Möbius parameter or stereographic pole input."""


@dataclass(frozen=True)
class MobiusDisk:
    """
    Disk automorphism M(z) = e^{iα} (z - a) / (1 - ā z), |a| < 1.
    """
    alpha: float = 0.0
    a: complex = 0j

    def __post_init__(self):
        a = complex(self.a)
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'alpha', float(self.alpha))
        if not np.isfinite(a.real) or not np.isfinite(a.imag) or abs(a) >= 1.0:
            raise ConformalError(f"Möbius parameter must satisfy |a| < 1, got a={a}")
        if abs(a) > MAX_MODULUS:
            raise ConformalError(f"|a|={abs(a)} too close to 1: conformal factor not resolvable")

    @property
    def is_identity(self) -> bool:
        return self.a == 0 and np.isclose(np.mod(self.alpha, 2.0 * np.pi), 0.0)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.exp(1j * self.alpha) * (z - self.a) / (1.0 - np.conj(self.a) * z)

    def factor(self, theta) -> np.ndarray:
        """e^λ(θ) = (1 - |a|²) / |1 - ā e^{iθ}|²."""
        theta = np.asarray(theta, dtype=float)
        den = np.abs(1.0 - np.conj(self.a) * np.exp(1j * theta)) ** 2
        return (1.0 - abs(self.a) ** 2) / den

    def boundary_angle(self, theta) -> np.ndarray:
        """arg M(e^{iθ}), continuous and increasing in θ."""
        theta = np.asarray(theta, dtype=float)
        return np.unwrap(np.angle(self(np.exp(1j * theta))))

    def matrix(self) -> np.ndarray:
        """2×2 matrix [[e^{iα}, -e^{iα} a], [-ā, 1]] acting by fractional-linear maps."""
        rot = np.exp(1j * self.alpha)
        return np.array([[rot, -rot * self.a], [-np.conj(self.a), 1.0]], dtype=complex)

    @classmethod
    def from_matrix(cls, mat: np.ndarray) -> 'MobiusDisk':
        """Recover (α, a) from any scalar multiple of a disk automorphism matrix."""
        A, B = mat[0]
        D = mat[1, 1]
        a = -B / A
        alpha = float(np.angle(A / D))
        return cls(alpha=alpha, a=complex(a))

    def compose(self, other: 'MobiusDisk') -> 'MobiusDisk':
        """self ∘ other."""
        return MobiusDisk.from_matrix(self.matrix() @ other.matrix())

    def inverse(self) -> 'MobiusDisk':
        return MobiusDisk.from_matrix(np.linalg.inv(self.matrix()))

    def to_dict(self) -> dict:
        return {'alpha': self.alpha, 'a_re': self.a.real, 'a_im': self.a.imag}

    @classmethod
    def from_dict(cls, data: dict) -> 'MobiusDisk':
        return cls(alpha=data.get('alpha', 0.0),
                   a=complex(data.get('a_re', 0.0), data.get('a_im', 0.0)))


def mobius_apply(M: MobiusDisk, z) -> np.ndarray:
    """Apply M to points of the unit circle."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(np.abs(z) - 1.0) > UNIT_TOL):
        raise ConformalError("mobius_apply expects points on the unit circle")
    return M(z)


def conformal_factor(M: MobiusDisk, theta) -> np.ndarray:
    """e^λ = |d/dθ arg M(e^{iθ})|."""
    return M.factor(theta)


def precompose(u: GridMap1D, M: MobiusDisk) -> GridMap1D:
    """
    Samples of u ∘ M by evaluating the trigonometric interpolant of u at
    arg M(e^{iθ_j}).
    """
    if M.is_identity:
        return u.copy()

    S = analyze(u)
    if tail_fraction(S) > RESOLVED_TAIL:
        warn_resolution(f"precompose: input tail share {tail_fraction(S):.2e} exceeds {RESOLVED_TAIL:.0e}")

    phi = np.angle(M(np.exp(1j * u.theta)))
    samples = evaluate(S, phi)

    sphere = u.sphere_valued
    if sphere:
        dev = np.max(np.abs(np.linalg.norm(samples, axis=1) - 1.0))
        sphere = dev <= SPHERE_TOL
    result = GridMap1D(samples, sphere_valued=sphere)

    tail = tail_fraction(analyze(result))
    debug_log.log_operator("precompose", {'N': u.N, 'alpha': M.alpha, 'a': M.a, 'tail': f"{tail:.2e}"})
    if tail > PRECOMPOSE_TAIL_WARN:
        warn_resolution(f"precompose: grid N={u.N} too coarse for |a|={abs(M.a):.3f} "
                        f"(tail share {tail:.2e})")
    return result


def stereographic(theta) -> np.ndarray:
    """P_{-i}: e^{iθ} ↦ cos θ / (1 + sin θ) = tan(π/4 - θ/2)."""
    theta = np.asarray(theta, dtype=float)
    psi = np.mod(theta + np.pi / 2.0, 2.0 * np.pi)
    if np.any((psi < POLE_TOL) | (2.0 * np.pi - psi < POLE_TOL)):
        raise ConformalError("stereographic projection is undefined at the pole -i")
    return np.tan(np.pi / 4.0 - theta / 2.0)


def stereographic_point(z) -> np.ndarray:
    """P_{-i} on points of S¹, stable on both half circles."""
    z = np.asarray(z, dtype=complex)
    c = z.real
    s = z.imag
    upper = s >= 0.0
    if np.any(~upper & (c == 0.0)):
        raise ConformalError("stereographic projection is undefined at the pole -i")
    with np.errstate(divide='ignore', invalid='ignore'):
        return np.where(upper, c / (1.0 + s), (1.0 - s) / c)


def stereographic_inv(x) -> np.ndarray:
    """P_{-i}^{-1}: x ↦ (2x + i(1 - x²)) / (1 + x²)."""
    x = np.asarray(x, dtype=float)
    den = 1.0 + x * x
    return (2.0 * x + 1j * (1.0 - x * x)) / den


def stereographic_jacobian(theta) -> np.ndarray:
    """|P'(θ)| = 1 / (1 + sin θ)."""
    return 1.0 / (1.0 + np.sin(np.asarray(theta, dtype=float)))


def pole_mask(N: int, width: float = POLE_EXCLUSION) -> np.ndarray:
    """True on grid angles at distance ≥ width from the pole θ = -π/2."""
    theta = theta_grid(N)
    dist = np.abs(np.angle(np.exp(1j * (theta + np.pi / 2.0))))
    return dist >= width


def pullback_halflap_check(t: float = 1.0, N: int = 2048, x0: float = 0.0,
                           tol: float = 1e-8, v: Optional[GridMap1D] = None,
                           rhs: Optional[np.ndarray] = None,
                           map_id: Optional[str] = None) -> IdentityReport:
    """
    Compare (-Δ)^{1/2}_{S¹} v · (1 + sin θ) with ((-Δ)^{1/2}_ℝ u)(P(θ)) for v = u ∘ P, away from the pole.

    Without v, u is the Poisson kernel G(t, · - x0), whose line half-Laplacian is -∂_tG.
    A sampled pullback v must come with rhs, the samples of ((-Δ)^{1/2}_ℝ u) ∘ P on
    the grid of v, shape (N,) or (N, m).

    Raises:
        ConformalError: if v is given without rhs, or rhs does not match v.
    """
    if v is None:
        kernel = pulled_back_G(t, theta_grid(N), x0)
        v = GridMap1D(kernel.value)
        rhs = -kernel.d_dt
        params = {'t': t, 'x0': x0, 'N': N, 'pole_exclusion': POLE_EXCLUSION}
    else:
        if rhs is None:
            raise ConformalError("a sampled pullback needs the line half-Laplacian as rhs")
        params = {'map': map_id, 'N': v.N, 'pole_exclusion': POLE_EXCLUSION}

    rhs_field = np.asarray(rhs, dtype=float)
    if rhs_field.ndim == 1:
        rhs_field = rhs_field[:, None]
    if rhs_field.shape != v.samples.shape:
        raise ConformalError(f"rhs shape {rhs_field.shape} does not match the pullback {v.samples.shape}")

    lhs_field = half_laplacian_samples(v) * (1.0 + np.sin(v.theta))[:, None]

    # scale floored by sup|v|: for constant u both sides vanish
    mask = pole_mask(v.N)
    scale = max(float(np.max(np.abs(lhs_field[mask]))) + float(np.max(np.abs(rhs_field[mask]))),
                float(np.max(np.abs(v.samples))))
    return residual_field_report("pullback_halflap", params,
                                 lhs_field[mask], rhs_field[mask], tol, scale=scale)


def mobius_covariance_residual(u: GridMap1D, M: MobiusDisk, tol: float = 1e-8,
                               map_id: Optional[str] = None) -> IdentityReport:
    """
    (-Δ)^{1/2}(u ∘ M) against e^λ ((-Δ)^{1/2} u) ∘ M on the grid of u.
    """
    left = half_laplacian_samples(precompose(u, M))

    Hu = synthesize(fractional_laplacian(analyze(u), 0.5))
    right = M.factor(u.theta)[:, None] * precompose(Hu, M).samples

    params = {'map': map_id, 'N': u.N, 'alpha': M.alpha, 'a': str(M.a)}
    return residual_field_report("mobius_covariance", params, left, right, tol)
