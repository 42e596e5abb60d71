"""
Spectral Core
Fourier representation of maps S¹ → ℝ^m and the multiplier operators built on it.

Convention: c_n = (1/2π) ∫ u(θ) e^{-inθ} dθ, so that (-Δ)^{1/2} acts on S¹ as
multiplication by |n|. Coefficients are stored for n = -N/2..N/2 with the
Nyquist coefficient split evenly between the two ends.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Callable

import numpy as np

from utils.debug_log import debug_log


# Tolerance for the sphere-valued flag on GridMap1D
SPHERE_TOL = 1e-12

# Supported orders s of (-Δ)^s
SUPPORTED_ORDERS = (0.25, 0.5)

# Points per block when evaluating the interpolant off-grid
EVAL_CHUNK = 256


class SpectralError(ValueError):
    """Invalid grid, spectrum or operator order."""


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def theta_grid(N: int) -> np.ndarray:
    """Uniform angles θ_j = 2πj/N."""
    return 2.0 * np.pi * np.arange(N) / N


@dataclass
class GridMap1D:
    """
    Samples of a map S¹ → ℝ^m on the uniform grid θ_j = 2πj/N.

    samples has shape (N, m); a 1-D array is read as a scalar map (m = 1).
    """
    samples: np.ndarray
    sphere_valued: bool = False

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim == 1:
            samples = samples[:, None]
        if samples.ndim != 2:
            raise SpectralError(f"samples must be (N, m), got shape {samples.shape}")

        N = samples.shape[0]
        if N < 4 or not _is_power_of_two(N):
            raise SpectralError(f"grid size must be a power of two >= 4, got {N}")
        if not np.all(np.isfinite(samples)):
            raise SpectralError("samples contain non-finite values")

        if self.sphere_valued:
            dev = np.max(np.abs(np.linalg.norm(samples, axis=1) - 1.0))
            if dev > SPHERE_TOL:
                raise SpectralError(f"map flagged sphere-valued but |u| deviates from 1 by {dev:.3e}")

        self.samples = samples

    @property
    def N(self) -> int:
        return self.samples.shape[0]

    @property
    def m(self) -> int:
        return self.samples.shape[1]

    @property
    def theta(self) -> np.ndarray:
        return theta_grid(self.N)

    def copy(self) -> 'GridMap1D':
        return GridMap1D(self.samples.copy(), sphere_valued=self.sphere_valued)

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], N: int,
                      sphere_valued: bool = False) -> 'GridMap1D':
        """Sample func(θ) -> (N, m) on the N-point grid."""
        if N < 4 or not _is_power_of_two(N):
            raise SpectralError(f"grid size must be a power of two >= 4, got {N}")
        return cls(func(theta_grid(N)), sphere_valued=sphere_valued)


@dataclass
class Spectrum:
    """
    Complex Fourier coefficients c_n, n = -N/2..N/2, one column per component.

    coeffs has shape (N + 1, m); row i holds c_{i - N/2}.
    """
    coeffs: np.ndarray
    N: int

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.ndim == 1:
            coeffs = coeffs[:, None]
        if coeffs.shape[0] != self.N + 1:
            raise SpectralError(f"expected {self.N + 1} coefficients, got {coeffs.shape[0]}")
        if self.N < 4 or not _is_power_of_two(self.N):
            raise SpectralError(f"grid size must be a power of two >= 4, got {self.N}")
        self.coeffs = coeffs

    @property
    def m(self) -> int:
        return self.coeffs.shape[1]

    @property
    def modes(self) -> np.ndarray:
        """Integer frequencies n = -N/2..N/2 matching the rows of coeffs."""
        return np.arange(-self.N // 2, self.N // 2 + 1)

    def mode(self, n: int) -> np.ndarray:
        """Coefficient vector c_n (zero outside the stored band)."""
        if abs(n) > self.N // 2:
            return np.zeros(self.m, dtype=complex)
        return self.coeffs[n + self.N // 2]

    def with_coeffs(self, coeffs: np.ndarray) -> 'Spectrum':
        return Spectrum(coeffs, self.N)


def analyze(u: GridMap1D) -> Spectrum:
    """Discrete Fourier analysis of a grid map.

    Example:
        >>> S = analyze(GridMap1D(np.cos(theta_grid(8))))
        >>> S.mode(1)   # array([0.5+0.j])
    """
    N = u.N
    F = np.fft.fft(u.samples, axis=0) / N

    half = N // 2
    coeffs = np.empty((N + 1, u.m), dtype=complex)
    # n = -N/2+1 .. N/2-1
    coeffs[1:half] = F[half + 1:]
    coeffs[half:N] = F[:half]
    # Nyquist split symmetrically
    coeffs[0] = F[half] / 2.0
    coeffs[N] = F[half] / 2.0

    return Spectrum(coeffs, N)


def max_retained_mode(S: Spectrum, rel_tol: float = 0.0) -> int:
    """Largest |n| whose coefficient is nonzero (above rel_tol·max|c|)."""
    mags = np.max(np.abs(S.coeffs), axis=1)
    peak = mags.max()
    if peak == 0.0:
        return 0
    nz = np.nonzero(mags > rel_tol * peak)[0]
    return int(np.max(np.abs(S.modes[nz])))


def synthesize(S: Spectrum, N: Optional[int] = None) -> GridMap1D:
    """Real samples of the trigonometric polynomial Σ c_n e^{inθ} on an N-point grid.

    Raises:
        SpectralError: if N is too small for the retained modes.
    """
    N = S.N if N is None else N
    if N < 4 or not _is_power_of_two(N):
        raise SpectralError(f"grid size must be a power of two >= 4, got {N}")

    top = max_retained_mode(S)
    if N < 2 * top:
        raise SpectralError(f"grid N={N} cannot hold retained mode |n|={top}")

    F = np.zeros((N, S.m), dtype=complex)
    idx = np.mod(S.modes, N)
    np.add.at(F, idx, S.coeffs)

    samples = np.fft.ifft(F, axis=0).real * N
    return GridMap1D(samples)


def _check_order(s: float) -> float:
    for supported in SUPPORTED_ORDERS:
        if np.isclose(s, supported, rtol=0.0, atol=1e-15):
            return supported
    raise SpectralError(f"unsupported fractional order s={s}; supported: {SUPPORTED_ORDERS}")


def fractional_laplacian(S: Spectrum, s: float = 0.5) -> Spectrum:
    """(-Δ)^s on S¹: multiply c_n by |n|^{2s}."""
    s = _check_order(s)
    mult = np.abs(S.modes).astype(float) ** (2.0 * s)
    debug_log.log_operator("fractional_laplacian", {'s': s, 'N': S.N, 'm': S.m})
    return S.with_coeffs(S.coeffs * mult[:, None])


def theta_derivative(S: Spectrum) -> Spectrum:
    """∂_θ: multiply c_n by in; the Nyquist pair is zeroed."""
    mult = 1j * S.modes.astype(float)
    mult[0] = 0.0
    mult[-1] = 0.0
    return S.with_coeffs(S.coeffs * mult[:, None])


def half_energy(S: Spectrum) -> float:
    """2π Σ_n |n| |c_n|², the energy ∫ |(-Δ)^{1/4} u|² dθ."""
    weights = np.abs(S.modes).astype(float)
    return float(2.0 * np.pi * np.sum(weights[:, None] * np.abs(S.coeffs) ** 2))


def integrate_s1(u: GridMap1D) -> np.ndarray:
    """∫_{S¹} u dθ by the uniform rule (equals 2π c₀)."""
    return 2.0 * np.pi * np.mean(u.samples, axis=0)


def evaluate(S: Spectrum, phi: Sequence[float]) -> np.ndarray:
    """Evaluate the interpolant Σ c_n e^{inφ} at arbitrary angles.

    Direct summation in blocks of EVAL_CHUNK points. Returns the real part,
    shape (len(phi), m).
    """
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    out = np.empty((phi.size, S.m))
    modes = S.modes.astype(float)
    for start in range(0, phi.size, EVAL_CHUNK):
        block = phi[start:start + EVAL_CHUNK]
        basis = np.exp(1j * np.outer(block, modes))
        out[start:start + EVAL_CHUNK] = (basis @ S.coeffs).real
    return out


def rotate_theta(S: Spectrum, phi: float) -> Spectrum:
    """Spectrum of θ ↦ u(θ + φ); the Nyquist pair is re-symmetrized."""
    shift = np.exp(1j * S.modes * phi)
    coeffs = S.coeffs * shift[:, None]
    nyq = 0.5 * (coeffs[0] + coeffs[-1])
    coeffs[0] = nyq
    coeffs[-1] = nyq
    return S.with_coeffs(coeffs)


def chop(S: Spectrum, rel_tol: float = 1e-14) -> Spectrum:
    """Zero real and imaginary parts below rel_tol·max|c|."""
    peak = np.max(np.abs(S.coeffs)) if S.coeffs.size else 0.0
    if peak == 0.0:
        return S.with_coeffs(S.coeffs.copy())
    cut = rel_tol * peak
    re = np.where(np.abs(S.coeffs.real) < cut, 0.0, S.coeffs.real)
    im = np.where(np.abs(S.coeffs.imag) < cut, 0.0, S.coeffs.imag)
    return S.with_coeffs(re + 1j * im)


def tail_fraction(S: Spectrum) -> float:
    """Share of Σ|c_n|² carried by |n| > N/4 (0 for the zero map)."""
    power = np.sum(np.abs(S.coeffs) ** 2, axis=1)
    total = power.sum()
    if total == 0.0:
        return 0.0
    tail = power[np.abs(S.modes) > S.N // 4].sum()
    return float(tail / total)


def complex_coefficients(S: Spectrum) -> np.ndarray:
    """Coefficients of w = u₁ + iu₂ for a planar map, indexed n = -N/2..N/2."""
    if S.m != 2:
        raise SpectralError(f"complex coefficients need m = 2, got m = {S.m}")
    return S.coeffs[:, 0] + 1j * S.coeffs[:, 1]


def winding_number(u: GridMap1D) -> float:
    """Degree of a map S¹ → S¹: (1/2π) ∫ (u₁ ∂_θu₂ − u₂ ∂_θu₁) dθ."""
    if u.m != 2:
        raise SpectralError(f"winding number needs m = 2, got m = {u.m}")
    du = synthesize(theta_derivative(analyze(u))).samples
    v = u.samples
    density = v[:, 0] * du[:, 1] - v[:, 1] * du[:, 0]
    return float(np.mean(density))


def half_laplacian_samples(u: GridMap1D) -> np.ndarray:
    """Samples of (-Δ)^{1/2} u on the grid of u."""
    return synthesize(fractional_laplacian(analyze(u), 0.5)).samples


def theta_derivative_samples(u: GridMap1D) -> np.ndarray:
    """Samples of ∂_θ u on the grid of u."""
    return synthesize(theta_derivative(analyze(u))).samples
