"""
Planar Identities
Pohozaev identities for maps u: ℝ² → ℝ^m with ∂u/∂x_i · Δu = 0, tested
against holomorphic vector fields on circles and with a Gaussian weight over
the plane.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import legendre
from numpy.polynomial import polynomial as P
from numpy.polynomial import Polynomial

from core.kernels import gaussian_weight, _check_t
from core.report import IdentityReport
from core.zoo.planar_maps import PlanarMap
from utils.debug_log import debug_log


# Hypothesis residual above which a report notes that ∂u/∂x_i · Δu = 0 fails
HYPOTHESIS_TOL = 1e-6

# Tail share of a Gaussian integral above which the map grows too fast
TAIL_REJECT = 1e-6


class QuadratureError(ValueError):
    """Convergence guard failure or integrand growth beyond the truncation."""


@dataclass
class QuadratureConfig:
    """Tensor quadrature over discs: uniform in angle, Gauss-Legendre in radius."""
    n_circle: int = 128          # angular points N_c
    n_radial: int = 96           # radial Gauss-Legendre nodes N_r
    epsilon: float = 1e-12       # weight level at the truncation radius
    guard_tol: float = 1e-10     # allowed change under doubling
    max_doublings: int = 3

    def radius(self, t: float) -> float:
        """R(t, ε) = 2 sqrt(t ln(1/ε))."""
        return 2.0 * np.sqrt(_check_t(t) * np.log(1.0 / self.epsilon))

    def to_dict(self) -> dict:
        return {
            'n_circle': self.n_circle,
            'n_radial': self.n_radial,
            'epsilon': self.epsilon,
            'guard_tol': self.guard_tol,
            'max_doublings': self.max_doublings,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'QuadratureConfig':
        unknown = set(data) - set(cls().to_dict())
        if unknown:
            raise QuadratureError(f"unknown quadrature keys: {', '.join(sorted(unknown))}")
        return cls(
            n_circle=int(data.get('n_circle', 128)),
            n_radial=int(data.get('n_radial', 96)),
            epsilon=float(data.get('epsilon', 1e-12)),
            guard_tol=float(data.get('guard_tol', 1e-10)),
            max_doublings=int(data.get('max_doublings', 3)),
        )


class HoloField:
    """Holomorphic vector field X = X₁ + iX₂ = p(z) for a complex polynomial p."""

    holomorphic = True

    def __init__(self, coeffs: Sequence[complex], name: str = ""):
        self.coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        self.name = name or f"poly{list(self.coeffs)}"

    def complex_value(self, x, y) -> np.ndarray:
        z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
        return P.polyval(z, self.coeffs)

    def value(self, x, y) -> Tuple[np.ndarray, np.ndarray]:
        X = self.complex_value(x, y)
        return X.real, X.imag

    def translated(self, x0) -> 'HoloField':
        """The field p ↦ X(p + x0)."""
        shift = Polynomial([complex(x0[0], x0[1]), 1.0])
        coeffs = Polynomial(self.coeffs)(shift).coef
        return type(self)(coeffs, f"{self.name}@{tuple(x0)}")

    def scaled_sum(self, alpha: complex, other: 'HoloField', beta: complex) -> 'HoloField':
        """αX + βY (α, β real for the linearity property)."""
        n = max(self.coeffs.size, other.coeffs.size)
        c = np.zeros(n, dtype=complex)
        c[:self.coeffs.size] += alpha * self.coeffs
        c[:other.coeffs.size] += beta * other.coeffs
        return type(self)(c, f"{alpha}*{self.name}+{beta}*{other.name}")

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class ConjugateField(HoloField):
    """Anti-holomorphic control field X = conj(p(z))."""

    holomorphic = False

    def complex_value(self, x, y) -> np.ndarray:
        return np.conj(super().complex_value(x, y))

    def translated(self, x0) -> 'ConjugateField':
        shift = Polynomial([complex(x0[0], x0[1]), 1.0])
        coeffs = Polynomial(self.coeffs)(shift).coef
        return ConjugateField(coeffs, f"{self.name}@{tuple(x0)}")


def radial_field(x0=(0.0, 0.0)) -> HoloField:
    """X = x - x0 as the holomorphic field z - z0."""
    return HoloField([-complex(x0[0], x0[1]), 1.0], name="z-x0")


def cauchy_riemann_residual(X: HoloField, points: np.ndarray, h: float = 1e-5) -> float:
    """sup of |∂₁X₁ - ∂₂X₂| and |∂₂X₁ + ∂₁X₂| by central differences at points (n, 2)."""
    x, y = points[:, 0], points[:, 1]
    X1_xp, X2_xp = X.value(x + h, y)
    X1_xm, X2_xm = X.value(x - h, y)
    X1_yp, X2_yp = X.value(x, y + h)
    X1_ym, X2_ym = X.value(x, y - h)
    d1X1 = (X1_xp - X1_xm) / (2.0 * h)
    d1X2 = (X2_xp - X2_xm) / (2.0 * h)
    d2X1 = (X1_yp - X1_ym) / (2.0 * h)
    d2X2 = (X2_yp - X2_ym) / (2.0 * h)
    return float(max(np.max(np.abs(d1X1 - d2X2)), np.max(np.abs(d2X1 + d1X2))))


def cauchy_riemann_report(X: HoloField, seed: int = 42, n_points: int = 32,
                          tol: float = 1e-6, box: float = 2.0) -> IdentityReport:
    """Cauchy-Riemann residual of X at random points of [-box, box]², relative to sup|X'|."""
    rng = np.random.default_rng(seed)
    points = rng.uniform(-box, box, size=(n_points, 2))
    residual = cauchy_riemann_residual(X, points)
    dcoeffs = P.polyder(X.coeffs) if X.coeffs.size > 1 else np.zeros(1, dtype=complex)
    scale = float(np.max(np.abs(P.polyval(points[:, 0] + 1j * points[:, 1], dcoeffs))))
    params = {'field': X.name, 'seed': seed, 'points': n_points}
    report = IdentityReport.compare("field_cauchy_riemann", params, residual, 0.0, tol,
                                    scale=2.0 * scale)
    debug_log.log_identity(report)
    return report


# ---------------------------------------------------------------------------
# Hypothesis
# ---------------------------------------------------------------------------

def hypothesis_residual(u: PlanarMap, region=(0.0, 1.0, 0.0, 1.0), n: int = 50) -> float:
    """sup of |∂_x u · Δu| and |∂_y u · Δu| on an n×n grid over (x0, x1, y0, y1)."""
    xs = np.linspace(region[0], region[1], n)
    ys = np.linspace(region[2], region[3], n)
    X, Y = np.meshgrid(xs, ys)
    return _hypothesis_at(u, X, Y)


def _hypothesis_at(u: PlanarMap, X: np.ndarray, Y: np.ndarray) -> float:
    dx, dy = u.gradient(X, Y)
    lap = u.laplacian(X, Y)
    rx = np.abs(np.sum(dx * lap, axis=-1))
    ry = np.abs(np.sum(dy * lap, axis=-1))
    return float(max(rx.max(), ry.max()))


def hypothesis_report(u: PlanarMap, region=(0.0, 1.0, 0.0, 1.0), tol: float = HYPOTHESIS_TOL,
                      map_id: Optional[str] = None, n: int = 50) -> IdentityReport:
    """Hypothesis residual normalized by sup|∇u| · sup|Δu|."""
    xs = np.linspace(region[0], region[1], n)
    ys = np.linspace(region[2], region[3], n)
    X, Y = np.meshgrid(xs, ys)
    dx, dy = u.gradient(X, Y)
    lap = u.laplacian(X, Y)
    grad = np.sqrt(np.sum(dx * dx + dy * dy, axis=-1)).max()
    scale = grad * np.sqrt(np.sum(lap * lap, axis=-1)).max()
    residual = _hypothesis_at(u, X, Y)
    params = {'map': map_id or u.name, 'region': list(region), 'grid': n}
    report = IdentityReport.compare("hypothesis_residual", params, residual, 0.0, tol, scale=scale)
    debug_log.log_identity(report)
    return report


# ---------------------------------------------------------------------------
# Circle quadrature
# ---------------------------------------------------------------------------

def _circle_samples(u: PlanarMap, x0, r: float, n: int):
    phi = 2.0 * np.pi * np.arange(n) / n
    nx, ny = np.cos(phi), np.sin(phi)
    x = x0[0] + r * nx
    y = x0[1] + r * ny
    dx, dy = u.gradient(x, y)
    return x, y, nx, ny, dx, dy


def _params(u: PlanarMap, map_id: Optional[str], **extra) -> Dict:
    params = {'map': map_id or u.name}
    params.update(extra)
    return params


def _annulus_hypothesis(u: PlanarMap, x0, r: float) -> float:
    rr = np.linspace(0.9 * r, 1.1 * r, 5)
    phi = 2.0 * np.pi * np.arange(64) / 64
    R, PHI = np.meshgrid(rr, phi)
    return _hypothesis_at(u, x0[0] + R * np.cos(PHI), x0[1] + R * np.sin(PHI))


def ball_pohozaev(u: PlanarMap, x0, r: float, X: HoloField, tol: float = 1e-10,
                  config: Optional[QuadratureConfig] = None,
                  map_id: Optional[str] = None) -> IdentityReport:
    """
    2 ∫_{∂B_r(x0)} (∂u/∂ν)·(∇u·X) dσ = ∫_{∂B_r(x0)} (X·ν) |∇u|² dσ.

    The gap is judged against the integral of the absolute integrands, which
    stays positive when both sides vanish by symmetry.
    """
    config = config or QuadratureConfig()
    x0 = (float(x0[0]), float(x0[1]))

    def sides(n):
        x, y, nx, ny, dx, dy = _circle_samples(u, x0, r, n)
        X1, X2 = X.value(x, y)
        d_nu = nx[:, None] * dx + ny[:, None] * dy
        d_X = X1[:, None] * dx + X2[:, None] * dy
        grad2 = np.sum(dx * dx + dy * dy, axis=-1)
        w = 2.0 * np.pi * r / n
        left = 2.0 * np.sum(d_nu * d_X, axis=-1)
        right = (X1 * nx + X2 * ny) * grad2
        return (w * np.sum(left), w * np.sum(right),
                w * (np.sum(np.abs(left)) + np.sum(np.abs(right))))

    lhs, rhs, scale = _guarded(sides, config.n_circle, config)
    params = _params(u, map_id, x0=list(x0), r=float(r), field=X.name,
                     hypothesis=_annulus_hypothesis(u, x0, r))
    report = IdentityReport.compare("ball_pohozaev", params, lhs, rhs, tol, scale=scale)
    debug_log.log_identity(report)
    return report


def ball_pohozaev_radial(u: PlanarMap, x0, r: float, tol: float = 1e-10,
                         config: Optional[QuadratureConfig] = None,
                         map_id: Optional[str] = None) -> IdentityReport:
    """∫_{∂B} |∂u/∂r|² dσ = r^{-2} ∫_{∂B} |∂u/∂θ|² dσ."""
    config = config or QuadratureConfig()
    x0 = (float(x0[0]), float(x0[1]))

    def sides(n):
        _, _, nx, ny, dx, dy = _circle_samples(u, x0, r, n)
        d_r = nx[:, None] * dx + ny[:, None] * dy
        # r^{-1} ∂_θ u is the tangential derivative
        d_tau = -ny[:, None] * dx + nx[:, None] * dy
        w = 2.0 * np.pi * r / n
        return w * np.sum(d_r * d_r), w * np.sum(d_tau * d_tau)

    lhs, rhs = _guarded(sides, config.n_circle, config)
    report = IdentityReport.compare("ball_pohozaev_radial",
                                    _params(u, map_id, x0=list(x0), r=float(r)), lhs, rhs, tol)
    debug_log.log_identity(report)
    return report


def ball_pohozaev_normal(u: PlanarMap, x0, r: float, tol: float = 1e-10,
                         config: Optional[QuadratureConfig] = None,
                         map_id: Optional[str] = None) -> IdentityReport:
    """2 ∫_{∂B} |∂u/∂ν|² dσ = ∫_{∂B} |∇u|² dσ."""
    config = config or QuadratureConfig()
    x0 = (float(x0[0]), float(x0[1]))

    def sides(n):
        _, _, nx, ny, dx, dy = _circle_samples(u, x0, r, n)
        d_nu = nx[:, None] * dx + ny[:, None] * dy
        w = 2.0 * np.pi * r / n
        return 2.0 * w * np.sum(d_nu * d_nu), w * np.sum(dx * dx + dy * dy)

    lhs, rhs = _guarded(sides, config.n_circle, config)
    report = IdentityReport.compare("ball_pohozaev_normal",
                                    _params(u, map_id, x0=list(x0), r=float(r)), lhs, rhs, tol)
    debug_log.log_identity(report)
    return report


def _guarded(sides, n: int, config: QuadratureConfig,
             compared: Sequence[int] = (0, 1)) -> Tuple[float, ...]:
    """
    Evaluate sides(n) and check stability of the compared entries under
    doubling of n, relative to the sum of all entries.
    """
    values = sides(n)
    for _ in range(config.max_doublings):
        n *= 2
        new = sides(n)
        size = sum(abs(v) for v in new)
        if all(abs(values[i] - new[i]) <= config.guard_tol * size for i in compared):
            return new
        values = new
    raise QuadratureError(f"circle quadrature not converged at {n} points")


# ---------------------------------------------------------------------------
# Gaussian-weighted identities over the plane
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return legendre.leggauss(n)


def _polar_grid(x0, R: float, n_radial: int, n_circle: int):
    """Nodes and area weights of the tensor rule on the disc B_R(x0)."""
    nodes, weights = _gauss_legendre(n_radial)
    rho = 0.5 * R * (nodes + 1.0)
    w_rho = 0.5 * R * weights * rho
    phi = 2.0 * np.pi * np.arange(n_circle) / n_circle
    RHO, PHI = np.meshgrid(rho, phi, indexing='ij')
    W = np.outer(w_rho, np.full(n_circle, 2.0 * np.pi / n_circle))
    return RHO, PHI, W


# entries of _gaussian_sides checked by the doubling guard; the absolute
# integrand has kinks and only sets the scale
_SMOOTH_SUMS = (0, 1, 3, 4)


def _gaussian_sides(u: PlanarMap, x0, t: float, X: HoloField, R: float,
                    n_radial: int, n_circle: int):
    RHO, PHI, W = _polar_grid(x0, R, n_radial, n_circle)
    nx, ny = np.cos(PHI), np.sin(PHI)
    x = x0[0] + RHO * nx
    y = x0[1] + RHO * ny
    dx, dy = u.gradient(x, y)
    X1, X2 = X.value(x, y)
    weight = gaussian_weight(t, np.stack([x, y], axis=-1), x0)

    d_nu = nx[..., None] * dx + ny[..., None] * dy
    d_tau = -ny[..., None] * dx + nx[..., None] * dy
    d_X = X1[..., None] * dx + X2[..., None] * dy
    grad2 = np.sum(dx * dx + dy * dy, axis=-1)

    lhs_density = 2.0 * weight * np.sum(d_X * d_nu, axis=-1) * RHO
    rhs_density = weight * RHO * (X1 * nx + X2 * ny) * grad2
    # ∬ w |x-x0|² |∂u/∂ν|² = ∬ w |∂u/∂θ|², ∂_θ u = ρ ∂_τ u
    radial_lhs = weight * RHO ** 2 * np.sum(d_nu * d_nu, axis=-1)
    radial_rhs = weight * RHO ** 2 * np.sum(d_tau * d_tau, axis=-1)

    absolute = np.abs(lhs_density) + np.abs(rhs_density)
    sums = [float(np.sum(W * f))
            for f in (lhs_density, rhs_density, absolute, radial_lhs, radial_rhs)]
    # boundary densities at ρ = R give the tail estimate
    edge = max(float(np.max(np.abs(f[-1]))) for f in (lhs_density, rhs_density))
    return sums, edge


def gaussian_pohozaev(u: PlanarMap, x0, t: float, X: HoloField, tol: float = 1e-8,
                      config: Optional[QuadratureConfig] = None,
                      map_id: Optional[str] = None,
                      radial_tol: Optional[float] = None) -> List[IdentityReport]:
    """
    2 ∬ e^{-|x-x0|²/4t} (∇u·X)(∂u/∂ν)|x-x0| dx = ∬ e^{-|x-x0|²/4t} ((x-x0)·X) |∇u|² dx

    with ν = (x - x0)/|x - x0|. Also returns the |x-x0|²|∂u/∂ν|² = |∂u/∂θ|²
    form when X is the radial field z - x0.

    Raises:
        QuadratureError: if doubling the grid changes the integrals beyond
            guard_tol after max_doublings, or if the integrand grows too fast
            for the truncation radius.
    """
    config = config or QuadratureConfig()
    x0 = (float(x0[0]), float(x0[1]))
    t = _check_t(t)
    R = config.radius(t)

    n_r, n_c = config.n_radial, config.n_circle
    sums, edge = _gaussian_sides(u, x0, t, X, R, n_r, n_c)
    for _ in range(config.max_doublings):
        n_r, n_c = 2 * n_r, 2 * n_c
        new, edge = _gaussian_sides(u, x0, t, X, R, n_r, n_c)
        size = sum(abs(v) for v in new)
        stable = all(abs(sums[i] - new[i]) <= config.guard_tol * size for i in _SMOOTH_SUMS)
        sums = new
        if stable:
            break
    else:
        raise QuadratureError(f"Gaussian quadrature not converged at N_r={n_r}, N_c={n_c}")

    lhs, rhs, scale, radial_lhs, radial_rhs = sums
    # ∫_R^∞ f ρ dρ ≈ 2t f(R) for f ~ e^{-ρ²/4t}
    tail = 4.0 * np.pi * t * edge
    if tail > TAIL_REJECT * scale and tail > 0.0:
        raise QuadratureError(f"integrand grows too fast for R={R:.3f}: tail ~{tail:.2e} vs {scale:.2e}")

    disc_hyp = _hypothesis_at(u, *_disc_points(x0, R))
    params = _params(u, map_id, x0=list(x0), t=float(t), field=X.name,
                     R=R, tail=tail, N_r=n_r, N_c=n_c, hypothesis=disc_hyp,
                     finite_energy="no" if _grows(u) else "yes")
    reports = [IdentityReport.compare("gaussian_pohozaev", params, lhs, rhs, tol, scale=scale)]

    if is_radial_field(X, x0):
        reports.append(IdentityReport.compare(
            "gaussian_pohozaev_radial", _params(u, map_id, x0=list(x0), t=float(t), R=R),
            radial_lhs, radial_rhs, tol if radial_tol is None else radial_tol))

    for report in reports:
        debug_log.log_identity(report)
    return reports


def _disc_points(x0, R: float):
    rr = np.linspace(0.0, R, 20)
    phi = 2.0 * np.pi * np.arange(48) / 48
    RR, PHI = np.meshgrid(rr, phi)
    return x0[0] + RR * np.cos(PHI), x0[1] + RR * np.sin(PHI)


def _grows(u: PlanarMap) -> bool:
    """True when |∇u|² is not integrable over ℝ² (nonconstant polynomial gradient)."""
    coeffs = getattr(u, 'coeffs', None)
    if coeffs is None:
        return u.m != 3
    return np.count_nonzero(coeffs[1:]) > 0


def is_radial_field(X: HoloField, x0) -> bool:
    if not X.holomorphic:
        return False
    c = np.zeros(2, dtype=complex)
    c[:min(2, X.coeffs.size)] = X.coeffs[:2]
    rest = X.coeffs[2:]
    return (np.allclose(c, [-complex(x0[0], x0[1]), 1.0], rtol=0, atol=1e-14)
            and not np.any(rest))
