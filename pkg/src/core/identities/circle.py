"""
Circle Identities
Verifiers for maps S¹ → ℝ^m: stationarity and Euler-Lagrange residuals, the
Pohozaev identities on S¹ and on ℝ (through the stereographic pullback), and
the family of quadratic relations between the Fourier coefficients.
"""

from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from core.conformal import MobiusDisk, precompose, stereographic_inv
from core.kernels import circle_F, pulled_back_G_weighted
from core.oracles import LINE_CUTOFF, line_pohozaev_oracle
from core.report import IdentityReport, residual_field_report, GAP_FLOOR
from core.spectral import (
    GridMap1D, Spectrum, SpectralError, analyze, chop,
    half_laplacian_samples, theta_derivative_samples,
)
from utils.debug_log import debug_log
from utils.warnings import warn_resolution


DEFAULT_T_GRID = (0.1, 0.5, 1.0, 2.0)
DEFAULT_LINE_T_GRID = (0.5, 1.0, 2.0)

# Coefficient parts below this share of max|c| are treated as zero
CHOP_TOL = 1e-14

# Relation sums are cut where e^{-nt} drops below this
SERIES_FLOOR = 1e-18

# Pole-neighbourhood share of a line integral that triggers a warning
POLE_WARN = 1e-8

# |v - u0| / h near the pole above which u - u0 decays only like 1/|x|
SLOW_DECAY_SLOPE = 1e-3


@dataclass
class FourierData:
    """
    Real Fourier coefficients a_k = (1/2π)∫u cos kθ, b_k = (1/2π)∫u sin kθ.

    a, b have shape (K + 1, m).
    """
    a: np.ndarray
    b: np.ndarray

    @property
    def K(self) -> int:
        return self.a.shape[0] - 1

    @classmethod
    def from_spectrum(cls, S: Spectrum, K: Optional[int] = None,
                      chop_tol: float = CHOP_TOL) -> 'FourierData':
        S = chop(S, chop_tol) if chop_tol > 0 else S
        K = S.N // 2 if K is None else min(K, S.N // 2)
        pos = np.array([S.mode(k) for k in range(K + 1)])
        neg = np.array([S.mode(-k) for k in range(K + 1)])
        a = ((pos + neg) / 2.0).real
        b = (1j * (pos - neg) / 2.0).real
        b[0] = 0.0
        return cls(a=a, b=b)

    @classmethod
    def from_map(cls, u: GridMap1D, K: Optional[int] = None) -> 'FourierData':
        return cls.from_spectrum(analyze(u), K)

    def pair(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        if k > self.K:
            zero = np.zeros(self.a.shape[1])
            return zero, zero
        return self.a[k], self.b[k]


@dataclass
class FourierRelation:
    """Relation sums S_n, T_n for one n with their scale and report."""
    n: int
    S: float
    T: float
    scale: float
    report: IdentityReport


def _base_params(u: GridMap1D, map_id: Optional[str]) -> dict:
    return {'map': map_id, 'N': u.N}


# ---------------------------------------------------------------------------
# Residual fields
# ---------------------------------------------------------------------------

def stationarity_residual(u: GridMap1D) -> Tuple[np.ndarray, float]:
    """∂_θu · (-Δ)^{1/2}u on the grid, and its sup-norm."""
    field = np.sum(theta_derivative_samples(u) * half_laplacian_samples(u), axis=1)
    return field, float(np.max(np.abs(field)))


def stationarity_report(u: GridMap1D, tol: float = 1e-10,
                        map_id: Optional[str] = None) -> IdentityReport:
    """Stationarity as a report, normalized by sup|∂_θu| · sup|(-Δ)^{1/2}u|."""
    du = theta_derivative_samples(u)
    Hu = half_laplacian_samples(u)
    field = np.sum(du * Hu, axis=1)
    scale = np.max(np.linalg.norm(du, axis=1)) * np.max(np.linalg.norm(Hu, axis=1))
    report = residual_field_report("stationarity", _base_params(u, map_id),
                                   field, np.zeros_like(field), tol, scale=scale)
    debug_log.log_identity(report)
    return report


def el_residual_sphere(u: GridMap1D) -> Tuple[np.ndarray, float]:
    """
    Tangential part of (-Δ)^{1/2}u for sphere-valued u.

    For S¹ ⊂ ℝ² this is |⟨(-Δ)^{1/2}u, Ju⟩| with J the quarter turn; in
    general |(-Δ)^{1/2}u - (u·(-Δ)^{1/2}u) u|.
    """
    if not u.sphere_valued:
        raise SpectralError("Euler-Lagrange residual needs a sphere-valued map")
    Hu = half_laplacian_samples(u)
    v = u.samples
    if u.m == 2:
        field = np.abs(-Hu[:, 0] * v[:, 1] + Hu[:, 1] * v[:, 0])
    else:
        tangential = Hu - np.sum(Hu * v, axis=1, keepdims=True) * v
        field = np.linalg.norm(tangential, axis=1)
    return field, float(np.max(field))


def el_residual_report(u: GridMap1D, tol: float = 1e-9,
                       map_id: Optional[str] = None) -> IdentityReport:
    field, _ = el_residual_sphere(u)
    scale = np.max(np.linalg.norm(half_laplacian_samples(u), axis=1))
    report = residual_field_report("el_residual_sphere", _base_params(u, map_id),
                                   field, np.zeros_like(field), tol, scale=scale)
    debug_log.log_identity(report)
    return report


# ---------------------------------------------------------------------------
# Pohozaev identities on S¹
# ---------------------------------------------------------------------------

def poho_s1_sides(u: GridMap1D, t: float, theta0: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """(∫ u ∂_tF dθ, ∫ u ∂_θF dθ) by the uniform rule."""
    kernel = circle_F(t, u.theta, theta0, band=u.N // 2 - 1)
    centred = u.samples - np.mean(u.samples, axis=0)
    w = 2.0 * np.pi / u.N
    A = w * (kernel.d_dt @ centred)
    B = w * (kernel.d_dspace @ centred)
    return A, B


def poho_s1(u: GridMap1D, t_grid: Sequence[float] = DEFAULT_T_GRID, theta0: float = 0.0,
            tol: float = 1e-8, map_id: Optional[str] = None) -> List[IdentityReport]:
    """|∫u ∂_tF|² = |∫u ∂_θF|² for each t."""
    reports = []
    for t in t_grid:
        A, B = poho_s1_sides(u, t, theta0)
        params = dict(_base_params(u, map_id), t=float(t), theta0=theta0)
        report = IdentityReport.compare("poho_s1", params, A @ A, B @ B, tol)
        debug_log.log_identity(report)
        reports.append(report)
    return reports


def poho_s1_first(u: GridMap1D, tol: float = 1e-10,
                  map_id: Optional[str] = None) -> IdentityReport:
    """|∫u cos θ|² = |∫u sin θ|²."""
    theta = u.theta
    centred = u.samples - np.mean(u.samples, axis=0)
    w = 2.0 * np.pi / u.N
    A1 = w * (np.cos(theta) @ centred)
    B1 = w * (np.sin(theta) @ centred)
    report = IdentityReport.compare("poho_s1_first", _base_params(u, map_id), A1 @ A1, B1 @ B1, tol)
    debug_log.log_identity(report)
    return report


# ---------------------------------------------------------------------------
# Fourier-coefficient relations
# ---------------------------------------------------------------------------

def relation_sums(data: FourierData, n: int) -> Tuple[float, float, float]:
    """
    S_n = Σ (n-k)k (a_k·a_{n-k} - b_k·b_{n-k}),
    T_n = Σ (n-k)k (a_k·b_{n-k} + b_k·a_{n-k}),
    scale_n = Σ (n-k)k (|a_k||a_{n-k}| + |b_k||b_{n-k}|), k = 1..n-1.
    """
    k = np.arange(max(1, n - data.K), min(n - 1, data.K) + 1)
    if k.size == 0:
        return 0.0, 0.0, 0.0
    j = n - k
    w = (j * k).astype(float)
    ak, bk = data.a[k], data.b[k]
    aj, bj = data.a[j], data.b[j]

    S = float(w @ (np.sum(ak * aj, axis=1) - np.sum(bk * bj, axis=1)))
    T = float(w @ (np.sum(ak * bj, axis=1) + np.sum(bk * aj, axis=1)))
    norm_a = np.linalg.norm(data.a, axis=1)
    norm_b = np.linalg.norm(data.b, axis=1)
    scale = float(w @ (norm_a[k] * norm_a[j] + norm_b[k] * norm_b[j]))
    return S, T, scale


def fourier_relations(u: GridMap1D, n_max: int = 10, tol: float = 1e-10,
                      map_id: Optional[str] = None,
                      data: Optional[FourierData] = None) -> List[FourierRelation]:
    """S_n = T_n = 0 for n = 2..n_max, judged against scale_n."""
    data = FourierData.from_map(u) if data is None else data
    if n_max - 1 > data.K:
        raise SpectralError(f"n_max={n_max} exceeds available coefficients K={data.K}")

    out = []
    for n in range(2, n_max + 1):
        S, T, scale = relation_sums(data, n)
        params = dict(_base_params(u, map_id), n=n, S_n=S, T_n=T, scale_n=scale)
        report = IdentityReport.compare("fourier_relation", params,
                                        max(abs(S), abs(T)), 0.0, tol, scale=scale)
        debug_log.log_identity(report)
        out.append(FourierRelation(n, S, T, scale, report))
    return out


def fourier_relation_alpha(u: GridMap1D, n: int, alpha: float, tol: float = 1e-10,
                           map_id: Optional[str] = None,
                           data: Optional[FourierData] = None) -> IdentityReport:
    """cos(nα) S_n + sin(nα) T_n = 0."""
    data = FourierData.from_map(u) if data is None else data
    S, T, scale = relation_sums(data, n)
    residual = np.cos(n * alpha) * S + np.sin(n * alpha) * T
    params = dict(_base_params(u, map_id), n=n, alpha=float(alpha))
    report = IdentityReport.compare("fourier_relation_alpha", params, residual, 0.0, tol, scale=scale)
    debug_log.log_identity(report)
    return report


def low_order_relations(u: GridMap1D, tol: float = 1e-12,
                        map_id: Optional[str] = None,
                        data: Optional[FourierData] = None) -> List[IdentityReport]:
    """
    The explicit relations for n = 2, 3, 4:

        n2_norm   |a₁| = |b₁|
        n2_dot    a₁·b₁ = 0
        n3_aa     a₁·a₂ = b₁·b₂
        n3_ab     a₁·b₂ = -a₂·b₁
        n4_norm   |a₂|² - |b₂|² = (3/2)(b₁·b₃ - a₁·a₃)
        n4_dot    a₂·b₂ = -(3/4)(a₁·b₃ + b₁·a₃)
    """
    data = FourierData.from_map(u, K=4) if data is None else data
    a1, b1 = data.pair(1)
    a2, b2 = data.pair(2)
    a3, b3 = data.pair(3)
    n = np.linalg.norm

    # (name, lhs, rhs, scale)
    rows = [
        ("n2_norm", n(a1), n(b1), n(a1) + n(b1)),
        ("n2_dot", a1 @ b1, 0.0, n(a1) * n(b1)),
        ("n3_aa", a1 @ a2, b1 @ b2, n(a1) * n(a2) + n(b1) * n(b2)),
        ("n3_ab", a1 @ b2, -(a2 @ b1), n(a1) * n(b2) + n(a2) * n(b1)),
        ("n4_norm", a2 @ a2 - b2 @ b2, 1.5 * (b1 @ b3 - a1 @ a3),
         n(a2) ** 2 + n(b2) ** 2 + 1.5 * (n(b1) * n(b3) + n(a1) * n(a3))),
        ("n4_dot", a2 @ b2, -0.75 * (a1 @ b3 + b1 @ a3),
         n(a2) * n(b2) + 0.75 * (n(a1) * n(b3) + n(b1) * n(a3))),
    ]

    reports = []
    for name, lhs, rhs, scale in rows:
        params = dict(_base_params(u, map_id), relation=name)
        report = IdentityReport.compare("low_order_relation", params, lhs, rhs, tol, scale=scale)
        debug_log.log_identity(report)
        reports.append(report)
    return reports


def pohozaev_series(u: GridMap1D, t: float, tol: float = 1e-8,
                    map_id: Optional[str] = None,
                    data: Optional[FourierData] = None) -> IdentityReport:
    """
    |∫u∂_tF|² - |∫u∂_θF|² = 4 Σ_{n≥2} e^{-nt} S_n.

    The left side comes from quadrature against the kernel fields, the right
    side from the Fourier data; the gap is judged against 4 Σ e^{-nt} scale_n.
    """
    data = FourierData.from_map(u) if data is None else data
    A, B = poho_s1_sides(u, t)
    lhs = A @ A - B @ B

    n_top = min(2 * data.K, int(np.ceil(-np.log(SERIES_FLOOR) / t)))
    rhs = 0.0
    scale = 0.0
    for n in range(2, n_top + 1):
        S, _, sc = relation_sums(data, n)
        decay = np.exp(-n * t)
        rhs += 4.0 * decay * S
        scale += 4.0 * decay * sc

    params = dict(_base_params(u, map_id), t=float(t))
    report = IdentityReport.compare("pohozaev_series", params, lhs, rhs, tol,
                                    scale=scale + abs(lhs) + abs(rhs))
    debug_log.log_identity(report)
    return report


# ---------------------------------------------------------------------------
# Möbius invariance
# ---------------------------------------------------------------------------

def mobius_invariance_suite(u: GridMap1D, M: MobiusDisk, n_max: int = 8, tol: float = 1e-8,
                            map_id: Optional[str] = None) -> List[IdentityReport]:
    """Rerun stationarity and the Fourier relations on u ∘ M."""
    w = precompose(u, M)
    extra = {'alpha': M.alpha, 'a': str(M.a)}

    base = stationarity_report(w, tol, map_id).with_params(**extra)
    reports = [replace(base, identity_name="mobius_stationarity")]
    for rel in fourier_relations(w, n_max, tol, map_id):
        reports.append(replace(rel.report.with_params(**extra),
                               identity_name="mobius_fourier_relation"))
    return reports


# ---------------------------------------------------------------------------
# Pohozaev identity on ℝ
# ---------------------------------------------------------------------------

def pole_index(N: int) -> int:
    """Grid index of θ = 3π/2, the pole -i of the stereographic projection."""
    return 3 * N // 4


def line_integrals(v: GridMap1D, u0: np.ndarray, t: float,
                   x0: float = 0.0) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    ∫_ℝ ∂_tG (u - u0) dx and ∫_ℝ ∂_xG (u - u0) dx through x = P(θ).

    Returns (I_t, I_x, pole_estimate) where pole_estimate bounds the part of
    both integrals coming from |x| > LINE_CUTOFF.
    """
    theta = v.theta
    d_dt_w, d_dx_w = pulled_back_G_weighted(t, theta, x0)
    diff = v.samples - np.asarray(u0, dtype=float)
    f_t = d_dt_w[:, None] * diff
    f_x = d_dx_w[:, None] * diff

    w = 2.0 * np.pi / v.N
    I_t = w * np.sum(f_t, axis=0)
    I_x = w * np.sum(f_x, axis=0)

    # |x| > R corresponds to the arc |θ + π/2| < 2/R; bound each integrand
    # there by its pole value plus a one-sided slope estimate
    j = pole_index(v.N)
    delta = 2.0 / LINE_CUTOFF
    estimate = 0.0
    for f in (f_t, f_x):
        centre = np.abs(f[j])
        slope = np.maximum(np.abs(f[(j + 1) % v.N] - f[j]),
                           np.abs(f[j - 1] - f[j])) / w
        estimate = max(estimate, float(np.max(2.0 * delta * (centre + delta * slope))))
    return I_t, I_x, estimate


def poho_r(v: GridMap1D, u0: Optional[Sequence[float]] = None,
           t_grid: Sequence[float] = DEFAULT_LINE_T_GRID, x0: float = 0.0,
           tol: float = 1e-6, map_id: Optional[str] = None) -> List[IdentityReport]:
    """
    |∫∂_tG(t,x)(u - u0) dx|² = |∫∂_xG(t,x)(u - u0) dx|² for u = v ∘ P^{-1}.

    u0 defaults to the value of v at the pole.
    """
    j = pole_index(v.N)
    u0 = v.samples[j].copy() if u0 is None else np.asarray(u0, dtype=float)

    h = 2.0 * np.pi / v.N
    near = max(np.linalg.norm(v.samples[(j + 1) % v.N] - u0),
               np.linalg.norm(v.samples[j - 1] - u0))
    decay_note = "not literally satisfied" if near / h > SLOW_DECAY_SLOPE else "satisfied"

    reports = []
    for t in t_grid:
        I_t, I_x, estimate = line_integrals(v, u0, t, x0)
        size = np.linalg.norm(I_t) + np.linalg.norm(I_x)
        if estimate > POLE_WARN * size and estimate > GAP_FLOOR:
            warn_resolution(f"poho_r: pole neighbourhood contributes ~{estimate:.2e} "
                            f"against integrals of size {size:.2e} (t={t})")
        params = dict(_base_params(v, map_id), t=float(t), x0=float(x0),
                      u0=[float(c) for c in u0], pole_estimate=estimate,
                      decay_hypothesis=decay_note)
        report = IdentityReport.compare("poho_r", params, I_t @ I_t, I_x @ I_x, tol)
        debug_log.log_identity(report)
        reports.append(report)
    return reports


def poho_r_oracle(v: GridMap1D, evaluator: Callable[[np.ndarray], np.ndarray],
                  u0: Optional[Sequence[float]] = None,
                  t_grid: Sequence[float] = DEFAULT_LINE_T_GRID, x0: float = 0.0,
                  tol: float = 1e-8, map_id: Optional[str] = None) -> List[IdentityReport]:
    """
    Cross-check the pullback line integrals against tanh-sinh quadrature on ℝ.

    evaluator maps angles to values of the circle map; the oracle integrates
    u(x) = evaluator(arg P^{-1}(x)) directly over |x - x0| <= LINE_CUTOFF.
    Reports I_t and I_x separately, gap = |I_pullback - I_oracle|.
    """
    j = pole_index(v.N)
    u0 = v.samples[j].copy() if u0 is None else np.asarray(u0, dtype=float)

    def on_line(x: float) -> np.ndarray:
        angle = np.angle(stereographic_inv(x))
        return np.asarray(evaluator(np.atleast_1d(angle)), dtype=float).reshape(-1)

    reports = []
    for t in t_grid:
        I_t, I_x, _ = line_integrals(v, u0, t, x0)
        O_t, O_x = line_pohozaev_oracle(on_line, u0, t, x0)
        for component, spectral, oracle in (('t', I_t, O_t), ('x', I_x, O_x)):
            params = dict(_base_params(v, map_id), t=float(t), x0=float(x0), component=component)
            report = IdentityReport.compare(
                "poho_r_oracle", params, np.linalg.norm(spectral), np.linalg.norm(oracle), tol,
                abs_gap=np.linalg.norm(spectral - oracle))
            debug_log.log_identity(report)
            reports.append(report)
    return reports
