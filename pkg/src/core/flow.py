"""
Half-Harmonic Flow
Projected gradient descent of the half-energy over sphere-valued circle maps,
and certification of its output with the circle verifiers.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from core.identities.circle import (
    el_residual_sphere, fourier_relations, poho_s1_first, stationarity_report,
)
from core.report import IdentityReport
from core.spectral import (
    GridMap1D, analyze, half_energy, half_laplacian_samples, winding_number,
)
from utils.debug_log import debug_log


# Allowed energy increase per accepted step
ENERGY_SLACK = 1e-12

# Floor of the certification tolerance
CERTIFY_FLOOR = 1e-12

# Default step at N = 256; other grids scale it by 256/N
DEFAULT_TAU_256 = 1e-3

LOG_EVERY = 500


class FlowError(ValueError):
    """Invalid flow input: non sphere-valued start or step above the stability bound."""


class FlowDivergedError(FlowError):
    """Energy kept increasing after max_halvings consecutive step halvings."""

    def __init__(self, message: str, state: 'FlowState'):
        super().__init__(message)
        self.state = state


@dataclass
class FlowConfig:
    """Step size, stopping rule and step control of the flow."""
    tau: Optional[float] = None      # None -> 1e-3 · 256/N
    max_steps: int = 10000
    tol: float = 1e-6                # stop once el_residual <= tol
    energy_tol: float = ENERGY_SLACK
    max_halvings: int = 6

    def step_size(self, N: int) -> float:
        return DEFAULT_TAU_256 * 256.0 / N if self.tau is None else float(self.tau)

    def to_dict(self) -> dict:
        return {
            'tau': self.tau,
            'max_steps': self.max_steps,
            'tol': self.tol,
            'energy_tol': self.energy_tol,
            'max_halvings': self.max_halvings,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'FlowConfig':
        tau = data.get('tau')
        return cls(
            tau=None if tau in (None, '', 'auto') else float(tau),
            max_steps=int(data.get('max_steps', 10000)),
            tol=float(data.get('tol', 1e-6)),
            energy_tol=float(data.get('energy_tol', ENERGY_SLACK)),
            max_halvings=int(data.get('max_halvings', 6)),
        )


@dataclass
class FlowState:
    u: GridMap1D
    step: int
    tau: float
    energy: float
    el_residual: float


@dataclass
class FlowResult:
    """Trace of a flow run; energies[k] and residuals[k] belong to accepted step k."""
    final: FlowState
    converged: bool
    energies: List[float] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)
    windings: List[float] = field(default_factory=list)
    halvings: int = 0

    @property
    def steps(self) -> int:
        return self.final.step

    def trace_rows(self) -> List[tuple]:
        return [(k, e, r) for k, (e, r) in enumerate(zip(self.energies, self.residuals))]


def _tangential(u: GridMap1D) -> np.ndarray:
    """P_{T_u}((-Δ)^{1/2}u) = Hu - (u·Hu)u."""
    Hu = half_laplacian_samples(u)
    v = u.samples
    return Hu - np.sum(Hu * v, axis=1, keepdims=True) * v


def _state(u: GridMap1D, step: int, tau: float) -> FlowState:
    _, residual = el_residual_sphere(u)
    return FlowState(u, step, tau, half_energy(analyze(u)), residual)


def half_harmonic_flow(u0: GridMap1D, config: Optional[FlowConfig] = None,
                       callback: Optional[Callable[[FlowState], None]] = None) -> FlowResult:
    """
    Iterate u <- normalize(u - tau · P_T((-Δ)^{1/2}u)) until el_residual <= tol.

    A step that raises the energy by more than energy_tol is retried with
    tau/2; the reduced step is kept afterwards.

    Raises:
        FlowError: if u0 is not sphere-valued or tau exceeds 2/N.
        FlowDivergedError: after max_halvings consecutive halvings.
    """
    config = config or FlowConfig()
    if not u0.sphere_valued:
        raise FlowError("flow needs a sphere-valued starting map")
    tau = config.step_size(u0.N)
    if not 0.0 < tau <= 2.0 / u0.N:
        raise FlowError(f"step size {tau:.3e} outside (0, 2/N] for N={u0.N}")

    track_degree = u0.m == 2
    state = _state(u0, 0, tau)
    result = FlowResult(final=state, converged=False)
    result.energies.append(state.energy)
    result.residuals.append(state.el_residual)
    if track_degree:
        result.windings.append(winding_number(state.u))

    debug_log.info(f"Flow start: N={u0.N}, m={u0.m}, tau={tau:.3e}, "
                   f"E={state.energy:.12g}, res={state.el_residual:.3e}")

    while state.el_residual > config.tol and state.step < config.max_steps:
        direction = _tangential(state.u)
        halvings = 0
        while True:
            moved = state.u.samples - tau * direction
            moved /= np.linalg.norm(moved, axis=1, keepdims=True)
            candidate = _state(GridMap1D(moved, sphere_valued=True), state.step + 1, tau)
            if candidate.energy <= state.energy + config.energy_tol:
                break
            halvings += 1
            result.halvings += 1
            if halvings > config.max_halvings:
                raise FlowDivergedError(
                    f"energy increased after {config.max_halvings} halvings at step {state.step} "
                    f"(tau={tau:.3e}, E={state.energy:.12g})", state)
            tau *= 0.5
            debug_log.warning(f"Flow step {state.step}: energy increase, tau -> {tau:.3e}")

        state = candidate
        result.energies.append(state.energy)
        result.residuals.append(state.el_residual)
        if track_degree:
            result.windings.append(winding_number(state.u))
        if callback:
            callback(state)
        if state.step % LOG_EVERY == 0:
            debug_log.log_flow(state.step, state.energy, state.el_residual, tau)

    result.final = state
    result.converged = state.el_residual <= config.tol
    debug_log.info(f"Flow end: steps={state.step}, converged={result.converged}, "
                   f"E={state.energy:.12g}, res={state.el_residual:.3e}")
    return result


def certify(result: FlowResult, kappa: float = 1.0, n_max: int = 2,
            map_id: str = "flow") -> List[IdentityReport]:
    """
    Run the circle verifiers on the flow output.

    Every tolerance is max(10·kappa·el_residual, CERTIFY_FLOOR), kappa being
    the condition factor between the Euler-Lagrange residual and the
    verifier residuals. Reports carry the converged flag.
    """
    state = result.final
    tol = max(10.0 * kappa * state.el_residual, CERTIFY_FLOOR)
    extra = {'converged': result.converged, 'steps': state.step,
             'el_residual': state.el_residual, 'kappa': kappa}

    reports = [stationarity_report(state.u, tol, map_id), poho_s1_first(state.u, tol, map_id)]
    reports.extend(rel.report for rel in fourier_relations(state.u, n_max, tol, map_id))
    return [r.with_params(**extra) for r in reports]
