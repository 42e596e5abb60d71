"""
Circle Maps
Test maps on S¹: Blaschke traces, negative controls, constants and random
tangent perturbations for flow starts.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence

import numpy as np

from core.spectral import GridMap1D, theta_grid
from utils.warnings import warn_resolution


# Factors beyond this modulus need very fine grids
RESOLVABLE_MODULUS = 0.9

# Band limit of the random tangent field used by perturb_tangent
PERTURB_MAX_MODE = 8

# Amplitude of the sin 2θ phase wobble in the second negative control
NEGCTRL_PHASE_AMPLITUDE = 0.3


class ZooError(ValueError):
    """Unknown map id or invalid map parameters."""


class CircleMapKind(Enum):
    """Families of circle maps."""
    BLASCHKE = "blaschke"
    NEGATIVE_CONTROL = "negctrl"
    CONSTANT = "const"


@dataclass
class BlaschkeProduct:
    """Finite Blaschke product e^{iα} ∏ (z - a_j) / (1 - ā_j z)."""
    factors: List[complex] = field(default_factory=lambda: [0j])
    phase: float = 0.0

    def __post_init__(self):
        self.factors = [complex(a) for a in self.factors]
        for a in self.factors:
            if not abs(a) < 1.0:
                raise ZooError(f"Blaschke factor must satisfy |a| < 1, got {a}")
            if abs(a) > RESOLVABLE_MODULUS:
                warn_resolution(f"Blaschke factor |a|={abs(a):.3f} > {RESOLVABLE_MODULUS}: "
                                "trace needs a fine grid")

    def value(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        w = np.full(z.shape, np.exp(1j * self.phase), dtype=complex)
        for a in self.factors:
            w = w * (z - a) / (1.0 - np.conj(a) * z)
        return w

    def on_circle(self, theta) -> np.ndarray:
        """Trace as ℝ² vectors, shape (len(θ), 2)."""
        w = self.value(np.exp(1j * np.asarray(theta, dtype=float)))
        return np.stack([w.real, w.imag], axis=-1)

    def to_dict(self) -> dict:
        return {
            'factors': [[a.real, a.imag] for a in self.factors],
            'phase': self.phase,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'BlaschkeProduct':
        factors = [complex(re, im) for re, im in data.get('factors', [[0.0, 0.0]])]
        return cls(factors=factors, phase=data.get('phase', 0.0))


def blaschke_trace(B: BlaschkeProduct, N: int) -> GridMap1D:
    """Samples of the boundary trace, sphere-valued in ℝ²."""
    samples = B.on_circle(theta_grid(N))
    # |B| = 1 up to roundoff; renormalize so the sphere flag holds exactly
    samples = samples / np.linalg.norm(samples, axis=1, keepdims=True)
    return GridMap1D(samples, sphere_valued=True)


def negctrl_values(variant: int, theta) -> np.ndarray:
    """Closed-form values of the negative controls."""
    theta = np.asarray(theta, dtype=float)
    if variant == 1:
        return np.stack([np.cos(2.0 * theta), np.sin(theta)], axis=-1)
    if variant == 2:
        phi = theta + NEGCTRL_PHASE_AMPLITUDE * np.sin(2.0 * theta)
        return np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    raise ZooError(f"unknown negative control variant {variant}")


def negative_control(N: int, variant: int = 1) -> GridMap1D:
    """
    Smooth maps that are not stationary.

    variant 1: (cos 2θ, sin θ), not sphere-valued.
    variant 2: e^{i(θ + 0.3 sin 2θ)}, sphere-valued.
    """
    return GridMap1D(negctrl_values(variant, theta_grid(N)), sphere_valued=(variant == 2))


def constant_map(p: Sequence[float], N: int) -> GridMap1D:
    p = np.asarray(p, dtype=float)
    samples = np.tile(p, (N, 1))
    sphere = bool(np.isclose(np.linalg.norm(p), 1.0, rtol=0.0, atol=1e-15))
    return GridMap1D(samples, sphere_valued=sphere)


def random_band_field(N: int, m: int, seed: int, max_mode: int = PERTURB_MAX_MODE) -> np.ndarray:
    """Band-limited random field ℝ^m with modes 0..max_mode and sup-norm 1."""
    rng = np.random.default_rng(seed)
    theta = theta_grid(N)
    k = np.arange(max_mode + 1)
    cos_coef = rng.standard_normal((max_mode + 1, m))
    sin_coef = rng.standard_normal((max_mode + 1, m))
    phase = np.outer(theta, k)
    W = np.cos(phase) @ cos_coef + np.sin(phase) @ sin_coef
    return W / np.max(np.linalg.norm(W, axis=1))


def perturb_tangent(u: GridMap1D, amplitude: float, seed: int = 42) -> GridMap1D:
    """
    normalize(u + amplitude · P_T(W)) for a fixed random band-limited W.

    Deterministic per seed; amplitude 0 returns a copy of u.
    """
    if not u.sphere_valued:
        raise ZooError("perturb_tangent needs a sphere-valued map")
    if amplitude == 0.0:
        return u.copy()

    W = random_band_field(u.N, u.m, seed)
    v = u.samples
    tangent = W - np.sum(W * v, axis=1, keepdims=True) * v
    moved = v + amplitude * tangent
    moved = moved / np.linalg.norm(moved, axis=1, keepdims=True)
    return GridMap1D(moved, sphere_valued=True)


@dataclass
class CircleMap:
    """A named circle map with a closed-form evaluator."""
    map_id: str
    kind: CircleMapKind
    evaluator: Callable[[np.ndarray], np.ndarray]
    sphere_valued: bool = False
    negative_control: bool = False
    description: str = ""
    blaschke: Optional[BlaschkeProduct] = None

    @property
    def m(self) -> int:
        return int(np.shape(self.evaluator(np.zeros(1)))[-1])

    def value_at(self, theta) -> np.ndarray:
        return self.evaluator(np.asarray(theta, dtype=float))

    def grid(self, N: int) -> GridMap1D:
        if self.blaschke is not None:
            return blaschke_trace(self.blaschke, N)
        samples = self.value_at(theta_grid(N))
        if self.sphere_valued:
            samples = samples / np.linalg.norm(samples, axis=1, keepdims=True)
        return GridMap1D(samples, sphere_valued=self.sphere_valued)
