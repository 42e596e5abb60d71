"""
Planar Maps
2-D test maps with closed-form value, gradient and Laplacian evaluators:
holomorphic maps into ℝ², their real parts, harmonic maps into S² obtained
from rational functions, and a control that breaks ∂u/∂x_i · Δu = 0.
"""

from enum import Enum
from typing import Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from core.zoo.circle_maps import ZooError


class PlanarMapKind(Enum):
    """How a planar map relates to the hypothesis ∂u/∂x_i · Δu = 0."""
    HARMONIC_FUNCTION = "harmonic-function"   # Δu = 0
    SPHERE_HARMONIC = "sphere-harmonic"       # Δu normal to S²
    GENERIC = "generic"                       # no structure (controls)


def _as_coeffs(coeffs: Sequence[complex]) -> np.ndarray:
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if c.size == 0:
        raise ZooError("polynomial needs at least one coefficient")
    return c


def _complex_point(x, y) -> np.ndarray:
    return np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)


class PlanarMap:
    """
    Base class for maps ℝ² → ℝ^m.

    value(x, y) has shape (..., m); gradient returns (∂_x u, ∂_y u), each (..., m).
    """

    kind = PlanarMapKind.GENERIC
    m = 2
    conformal = False

    def __init__(self, name: str):
        self.name = name

    def value(self, x, y) -> np.ndarray:
        raise NotImplementedError

    def gradient(self, x, y) -> Tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def laplacian(self, x, y) -> np.ndarray:
        raise NotImplementedError

    def translated(self, x0) -> 'PlanarMap':
        """The map p ↦ u(p + x0)."""
        return _TranslatedMap(self, x0)

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class _TranslatedMap(PlanarMap):

    def __init__(self, base: PlanarMap, x0):
        super().__init__(f"{base.name}@{tuple(x0)}")
        self.base = base
        self.dx, self.dy = float(x0[0]), float(x0[1])
        self.kind = base.kind
        self.m = base.m
        self.conformal = base.conformal

    def value(self, x, y):
        return self.base.value(np.asarray(x) + self.dx, np.asarray(y) + self.dy)

    def gradient(self, x, y):
        return self.base.gradient(np.asarray(x) + self.dx, np.asarray(y) + self.dy)

    def laplacian(self, x, y):
        return self.base.laplacian(np.asarray(x) + self.dx, np.asarray(y) + self.dy)


class HolomorphicMap(PlanarMap):
    """u = (Re f, Im f) for a complex polynomial f (ascending coefficients)."""

    kind = PlanarMapKind.HARMONIC_FUNCTION
    m = 2
    conformal = True

    def __init__(self, coeffs: Sequence[complex], name: str = ""):
        self.coeffs = _as_coeffs(coeffs)
        self.dcoeffs = P.polyder(self.coeffs) if self.coeffs.size > 1 else np.zeros(1, dtype=complex)
        super().__init__(name or f"holo{list(self.coeffs)}")

    def value(self, x, y):
        f = P.polyval(_complex_point(x, y), self.coeffs)
        return np.stack([f.real, f.imag], axis=-1)

    def gradient(self, x, y):
        df = P.polyval(_complex_point(x, y), self.dcoeffs)
        # ∂_x f = f', ∂_y f = i f'
        dx = np.stack([df.real, df.imag], axis=-1)
        dy = np.stack([-df.imag, df.real], axis=-1)
        return dx, dy

    def laplacian(self, x, y):
        shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
        return np.zeros(shape + (2,))


class RealPartMap(PlanarMap):
    """Scalar harmonic function u = Re f; harmonic but not conformal."""

    kind = PlanarMapKind.HARMONIC_FUNCTION
    m = 1
    conformal = False

    def __init__(self, coeffs: Sequence[complex], name: str = ""):
        self.coeffs = _as_coeffs(coeffs)
        self.dcoeffs = P.polyder(self.coeffs) if self.coeffs.size > 1 else np.zeros(1, dtype=complex)
        super().__init__(name or f"holoreal{list(self.coeffs)}")

    def value(self, x, y):
        f = P.polyval(_complex_point(x, y), self.coeffs)
        return f.real[..., None]

    def gradient(self, x, y):
        df = P.polyval(_complex_point(x, y), self.dcoeffs)
        return df.real[..., None], -df.imag[..., None]

    def laplacian(self, x, y):
        shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
        return np.zeros(shape + (1,))


class SphereMap(PlanarMap):
    """
    Harmonic map into S²: inverse stereographic projection of w = p/q.

    u = (2 Re w, 2 Im w, |w|² - 1) / (1 + |w|²); w = 0 goes to (0, 0, -1).
    """

    kind = PlanarMapKind.SPHERE_HARMONIC
    m = 3
    conformal = True

    def __init__(self, numerator: Sequence[complex], denominator: Sequence[complex] = (1.0,),
                 name: str = ""):
        self.num = _as_coeffs(numerator)
        self.den = _as_coeffs(denominator)
        self.dnum = P.polyder(self.num) if self.num.size > 1 else np.zeros(1, dtype=complex)
        self.dden = P.polyder(self.den) if self.den.size > 1 else np.zeros(1, dtype=complex)
        super().__init__(name or f"s2{list(self.num)}/{list(self.den)}")

    def _w(self, x, y):
        z = _complex_point(x, y)
        p = P.polyval(z, self.num)
        q = P.polyval(z, self.den)
        dp = P.polyval(z, self.dnum)
        dq = P.polyval(z, self.dden)
        w = p / q
        dw = (dp * q - p * dq) / (q * q)
        return w, dw

    def value(self, x, y):
        w, _ = self._w(x, y)
        D = 1.0 + np.abs(w) ** 2
        return np.stack([2.0 * w.real / D, 2.0 * w.imag / D, (np.abs(w) ** 2 - 1.0) / D], axis=-1)

    def _directional(self, w, dw):
        D = 1.0 + np.abs(w) ** 2
        dD = 2.0 * (np.conj(w) * dw).real
        d1 = 2.0 * dw.real / D - 2.0 * w.real * dD / D ** 2
        d2 = 2.0 * dw.imag / D - 2.0 * w.imag * dD / D ** 2
        d3 = 2.0 * dD / D ** 2
        return np.stack([d1, d2, d3], axis=-1)

    def gradient(self, x, y):
        w, dw = self._w(x, y)
        return self._directional(w, dw), self._directional(w, 1j * dw)

    def laplacian(self, x, y):
        # Δu = -|∇u|² u with |∇u|² = 8|w'|²/(1+|w|²)²
        w, dw = self._w(x, y)
        D = 1.0 + np.abs(w) ** 2
        g = 8.0 * np.abs(dw) ** 2 / D ** 2
        return -g[..., None] * self.value(x, y)


class BrokenControl(PlanarMap):
    """u = (x², y): Δu = (2, 0), so ∂_x u · Δu = 4x."""

    kind = PlanarMapKind.GENERIC
    m = 2
    conformal = False

    def __init__(self, name: str = "broken:1"):
        super().__init__(name)

    def value(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        x, y = np.broadcast_arrays(x, y)
        return np.stack([x * x, y], axis=-1)

    def gradient(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        dx = np.stack([2.0 * x, np.zeros_like(x)], axis=-1)
        dy = np.stack([np.zeros_like(y), np.ones_like(y)], axis=-1)
        return dx, dy

    def laplacian(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return np.stack([np.full_like(x, 2.0), np.zeros_like(y)], axis=-1)


def holomorphic_planar(coeffs: Sequence[complex], name: str = "") -> HolomorphicMap:
    """u = (Re f, Im f) for f = Σ coeffs[k] z^k."""
    return HolomorphicMap(coeffs, name)


def meromorphic_to_s2(numerator: Sequence[complex],
                      denominator: Sequence[complex] = (1.0,), name: str = "") -> SphereMap:
    """Harmonic map into S² from the rational function p/q."""
    return SphereMap(numerator, denominator, name)


def monomial(n: int) -> np.ndarray:
    """Ascending coefficients of z^n."""
    if n < 0:
        raise ZooError(f"monomial degree must be >= 0, got {n}")
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1.0
    return c
