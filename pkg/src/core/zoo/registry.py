"""
Zoo Registry
Stable string ids for every built-in test map and the parser for ids and
inline map definitions.

Circle ids:
    identity, blaschke:<a1>,<a2>,...[@phase], negctrl:1, negctrl:2, const:<p1>,<p2>,...
Planar ids:
    holo:<poly>, holoreal:<poly>, s2:<poly>[/<poly>], broken:1
where <poly> is a sum of terms like 1, z, z2, 0.5*z3, (1+2j)*z.
"""

import re
from typing import Dict, List, Union

import numpy as np

from core.zoo.circle_maps import (
    BlaschkeProduct, CircleMap, CircleMapKind, ZooError,
    negctrl_values, NEGCTRL_PHASE_AMPLITUDE,
)
from core.zoo.planar_maps import (
    PlanarMap, BrokenControl, HolomorphicMap, RealPartMap, SphereMap,
)


ZooMap = Union[CircleMap, PlanarMap]

_TERM = re.compile(r'^(?:(?P<coef>.+)\*)?z(?P<power>\d*)$')


# Built-in manifest: id -> description
ZOO_MANIFEST: Dict[str, str] = {
    "identity": "identity map z -> z on S¹ (Blaschke product with a = 0)",
    "blaschke:0.5": "single Blaschke factor a = 0.5",
    "blaschke:0.3,-0.2": "Blaschke product with factors 0.3 and -0.2",
    "blaschke:0.5+0.2j": "single Blaschke factor with complex a = 0.5 + 0.2i",
    "negctrl:1": "negative control (cos 2θ, sin θ), not sphere-valued",
    "negctrl:2": f"negative control e^(i(θ + {NEGCTRL_PHASE_AMPLITUDE} sin 2θ)), sphere-valued",
    "const:1,0": "constant map (1, 0)",
    "holo:z": "u = (Re z, Im z)",
    "holo:z2": "u = (Re z², Im z²)",
    "holo:z3": "u = (Re z³, Im z³)",
    "holoreal:z2": "scalar harmonic function u = Re z² = x² - y²",
    "holoreal:z": "scalar harmonic function u = x",
    "s2:z": "inverse stereographic projection of z into S²",
    "s2:z2": "inverse stereographic projection of z² into S²",
    "broken:1": "control u = (x², y) violating ∂u/∂x_i · Δu = 0",
}

# Ids of maps that are expected to fail the verifiers
NEGATIVE_CONTROLS = ("negctrl:", "broken:")


def is_negative_control(map_id: str) -> bool:
    return map_id.startswith(NEGATIVE_CONTROLS)


def parse_complex_list(text: str) -> List[complex]:
    """'0.3, -0.2, 0.5+0.2j' -> [0.3, -0.2, (0.5+0.2j)]."""
    items = [item.strip().replace(' ', '') for item in text.split(',') if item.strip()]
    try:
        return [complex(item) for item in items]
    except ValueError as e:
        raise ZooError(f"cannot parse numbers from {text!r}: {e}") from None


def parse_polynomial(text: str) -> np.ndarray:
    """
    Ascending complex coefficients of a polynomial in z.

    Example:
        >>> parse_polynomial("1+z2")   # array([1, 0, 1])
    """
    text = text.replace(' ', '')
    if not text:
        raise ZooError("empty polynomial")

    # split before '+'/'-' outside parentheses; a sign after a mantissa's e/E is an exponent
    terms, depth, current = [], 0, ''
    for i, ch in enumerate(text):
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        exponent = i >= 2 and text[i - 1] in 'eE' and (text[i - 2].isdigit() or text[i - 2] == '.')
        if ch in '+-' and depth == 0 and not exponent and current:
            terms.append(current)
            current = ch
        else:
            current += ch
    terms.append(current)

    coeffs: Dict[int, complex] = {}
    for term in terms:
        sign, body = (-1.0, term[1:]) if term[0] == '-' else (1.0, term.lstrip('+'))
        if not body:
            raise ZooError(f"malformed polynomial {text!r}")
        match = _TERM.match(body)
        try:
            if match:
                coef_text = match.group('coef')
                power = int(match.group('power') or 1)
                coef = complex(coef_text.strip('()')) if coef_text else 1.0
            else:
                power, coef = 0, complex(body.strip('()'))
        except ValueError:
            raise ZooError(f"malformed polynomial term {term!r} in {text!r}") from None
        coeffs[power] = coeffs.get(power, 0j) + sign * coef

    out = np.zeros(max(coeffs) + 1, dtype=complex)
    for power, coef in coeffs.items():
        out[power] = coef
    return out


def _blaschke_map(map_id: str, body: str) -> CircleMap:
    phase = 0.0
    if '@' in body:
        body, phase_text = body.split('@', 1)
        try:
            phase = float(phase_text)
        except ValueError:
            raise ZooError(f"bad phase in {map_id!r}") from None
    B = BlaschkeProduct(factors=parse_complex_list(body), phase=phase)
    return CircleMap(map_id, CircleMapKind.BLASCHKE, B.on_circle, sphere_valued=True,
                     description=ZOO_MANIFEST.get(map_id, "Blaschke product"), blaschke=B)


def _negctrl_map(map_id: str, body: str) -> CircleMap:
    if body not in ('1', '2'):
        raise ZooError(f"unknown negative control {map_id!r}")
    variant = int(body)
    return CircleMap(map_id, CircleMapKind.NEGATIVE_CONTROL,
                     lambda theta: negctrl_values(variant, theta),
                     sphere_valued=(variant == 2), negative_control=True,
                     description=ZOO_MANIFEST[map_id])


def _constant_map(map_id: str, body: str) -> CircleMap:
    values = [c.real for c in parse_complex_list(body)]
    if not values:
        raise ZooError(f"constant map {map_id!r} needs at least one component")
    p = np.asarray(values, dtype=float)

    def evaluator(theta):
        return np.tile(p, (np.size(theta), 1))

    sphere = bool(abs(np.linalg.norm(p) - 1.0) <= 1e-15)
    return CircleMap(map_id, CircleMapKind.CONSTANT, evaluator, sphere_valued=sphere,
                     description=ZOO_MANIFEST.get(map_id, "constant map"))


def resolve_map(map_id: str) -> ZooMap:
    """
    Build the map with the given id.

    Raises:
        ZooError: for unknown or malformed ids.
    """
    map_id = map_id.strip()
    if map_id == "identity":
        return _blaschke_map(map_id, "0")

    family, sep, body = map_id.partition(':')
    if not sep or not body:
        raise ZooError(f"unknown map id {map_id!r}")

    if family == "blaschke":
        return _blaschke_map(map_id, body)
    if family == "negctrl":
        return _negctrl_map(map_id, body)
    if family == "const":
        return _constant_map(map_id, body)
    if family == "holo":
        return HolomorphicMap(parse_polynomial(body), name=map_id)
    if family == "holoreal":
        return RealPartMap(parse_polynomial(body), name=map_id)
    if family == "s2":
        num, _, den = body.partition('/')
        return SphereMap(parse_polynomial(num), parse_polynomial(den) if den else (1.0,),
                         name=map_id)
    if family == "broken" and body == "1":
        return BrokenControl(map_id)

    raise ZooError(f"unknown map id {map_id!r}")


def build_inline_map(name: str, data: Dict[str, str]) -> ZooMap:
    """
    Build a map from an inline definition (a [map:<name>] suite section).

    Keys: kind = blaschke | negctrl | const | holo | holoreal | s2 | broken,
    then factors/phase, variant, value, coeffs, numerator/denominator.
    """
    kind = data.get('kind', '').strip()
    if kind == "blaschke":
        body = data.get('factors', '0')
        if 'phase' in data:
            body += f"@{data['phase']}"
        return _blaschke_map(name, body)
    if kind == "negctrl":
        return _negctrl_map(name, data.get('variant', '1').strip())
    if kind == "const":
        return _constant_map(name, data.get('value', ''))
    if kind in ("holo", "holoreal"):
        coeffs = parse_complex_list(data.get('coeffs', ''))
        if not coeffs:
            raise ZooError(f"inline map {name!r} needs coeffs")
        cls = HolomorphicMap if kind == "holo" else RealPartMap
        return cls(coeffs, name=name)
    if kind == "s2":
        num = parse_complex_list(data.get('numerator', ''))
        den = parse_complex_list(data.get('denominator', '1'))
        if not num:
            raise ZooError(f"inline map {name!r} needs a numerator")
        return SphereMap(num, den, name=name)
    if kind == "broken":
        return BrokenControl(name)
    raise ZooError(f"inline map {name!r} has unknown kind {kind!r}")


def get_zoo_ids() -> List[str]:
    """Built-in ids in manifest order."""
    return list(ZOO_MANIFEST.keys())


def is_circle_map(obj: ZooMap) -> bool:
    return isinstance(obj, CircleMap)
