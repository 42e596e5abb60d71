"""Test map generators: circle maps, planar maps and the id registry."""

from .circle_maps import (
    BlaschkeProduct, CircleMap, CircleMapKind, ZooError,
    blaschke_trace, negative_control, perturb_tangent, constant_map,
)
from .planar_maps import (
    PlanarMap, PlanarMapKind, holomorphic_planar, meromorphic_to_s2,
)
from .registry import resolve_map, build_inline_map, is_negative_control, ZOO_MANIFEST

__all__ = [
    'BlaschkeProduct', 'CircleMap', 'CircleMapKind', 'ZooError',
    'blaschke_trace', 'negative_control', 'perturb_tangent', 'constant_map',
    'PlanarMap', 'PlanarMapKind', 'holomorphic_planar', 'meromorphic_to_s2',
    'resolve_map', 'build_inline_map', 'is_negative_control', 'ZOO_MANIFEST',
]
