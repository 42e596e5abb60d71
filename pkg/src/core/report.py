"""
Identity Report
One verified instance of an identity: both sides, the gaps and the verdict.
"""

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np


# Denominator floor for relative gaps
GAP_FLOOR = 1e-30


class Expectation(Enum):
    """Expected verdict of a report inside a suite run; stored in params by value."""
    PASS = "pass"
    FAIL = "fail"      # negative controls
    ANY = "any"        # recorded, not judged


@dataclass
class IdentityReport:
    """Result of checking lhs = rhs for one parameter set."""
    identity_name: str
    params: Dict[str, Any]
    lhs: float
    rhs: float
    abs_gap: float
    rel_gap: float
    passed: bool

    @classmethod
    def compare(cls, identity_name: str, params: Dict[str, Any],
                lhs: float, rhs: float, tol: float,
                scale: Optional[float] = None,
                abs_gap: Optional[float] = None) -> 'IdentityReport':
        """
        Build a report from both sides.

        Args:
            identity_name: Stable identity identifier
            params: Parameters of this instance (tol is added)
            lhs, rhs: The two sides
            tol: Relative tolerance for the verdict
            scale: Normalization of the gap; defaults to |lhs| + |rhs|
            abs_gap: Precomputed absolute gap (e.g. a sup-norm of a difference field)

        Returns:
            IdentityReport with rel_gap clipped to [0, 1].
        """
        lhs = float(lhs)
        rhs = float(rhs)
        gap = abs(lhs - rhs) if abs_gap is None else float(abs_gap)
        denom = (abs(lhs) + abs(rhs)) if scale is None else float(scale)
        rel = min(1.0, gap / (denom + GAP_FLOOR))

        params = dict(params)
        params['tol'] = float(tol)
        return cls(
            identity_name=identity_name,
            params=params,
            lhs=lhs,
            rhs=rhs,
            abs_gap=gap,
            rel_gap=rel,
            passed=bool(rel <= tol),
        )

    @property
    def expectation(self) -> Expectation:
        return Expectation(self.params.get('expect', Expectation.PASS.value))

    @property
    def as_expected(self) -> bool:
        expect = self.expectation
        if expect == Expectation.ANY:
            return True
        if expect == Expectation.FAIL:
            return not self.passed
        return self.passed

    def with_params(self, **extra) -> 'IdentityReport':
        """Copy with additional params."""
        params = dict(self.params)
        params.update(extra)
        return IdentityReport(self.identity_name, params, self.lhs, self.rhs,
                              self.abs_gap, self.rel_gap, self.passed)

    def param_string(self) -> str:
        return ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))

    def sort_key(self) -> Tuple[str, str]:
        return (self.identity_name, json.dumps(_plain(self.params), sort_keys=True))

    def to_dict(self) -> dict:
        return {
            'identity_name': self.identity_name,
            'params': _plain(self.params),
            'lhs': self.lhs,
            'rhs': self.rhs,
            'abs_gap': self.abs_gap,
            'rel_gap': self.rel_gap,
            'pass': self.passed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'IdentityReport':
        return cls(
            identity_name=data['identity_name'],
            params=dict(data.get('params', {})),
            lhs=float(data['lhs']),
            rhs=float(data['rhs']),
            abs_gap=float(data['abs_gap']),
            rel_gap=float(data['rel_gap']),
            passed=bool(data['pass']),
        )


def _plain(value: Any) -> Any:
    """Convert numpy scalars/arrays and complex numbers to JSON-friendly values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        return f"{value.real:.17g}{value.imag:+.17g}j"
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def residual_field_report(identity_name: str, params: Dict[str, Any],
                          left: np.ndarray, right: np.ndarray, tol: float,
                          scale: Optional[float] = None) -> IdentityReport:
    """
    Report for a pointwise identity L = R sampled on a grid.

    lhs = sup|L|, rhs = sup|R|, abs_gap = sup|L − R|.
    """
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    lhs = float(np.max(np.abs(left))) if left.size else 0.0
    rhs = float(np.max(np.abs(right))) if right.size else 0.0
    gap = float(np.max(np.abs(left - right))) if left.size else 0.0
    return IdentityReport.compare(identity_name, params, lhs, rhs, tol,
                                  scale=scale, abs_gap=gap)
