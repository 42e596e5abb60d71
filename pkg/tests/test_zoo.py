"""Tests for the test-map zoo and its id registry."""

import numpy as np
import pytest

from core.spectral import theta_grid
from core.zoo import (
    BlaschkeProduct, CircleMap, PlanarMapKind, ZOO_MANIFEST, ZooError,
    build_inline_map, constant_map, is_negative_control, negative_control,
    perturb_tangent, resolve_map,
)
from core.identities.planar import hypothesis_residual
from core.zoo.planar_maps import holomorphic_planar, meromorphic_to_s2, monomial
from core.zoo.registry import parse_complex_list, parse_polynomial


class TestRegistry:

    @pytest.mark.parametrize("map_id", list(ZOO_MANIFEST))
    def test_manifest_ids_resolve(self, map_id):
        assert resolve_map(map_id) is not None

    @pytest.mark.parametrize("map_id", ["", "blaschke", "negctrl:3", "mystery:1", "broken:2", "holo:"])
    def test_unknown_ids(self, map_id):
        with pytest.raises(ZooError):
            resolve_map(map_id)

    def test_factor_outside_disk(self):
        with pytest.raises(ZooError):
            resolve_map("blaschke:1.0")

    def test_negative_controls(self):
        assert is_negative_control("negctrl:2")
        assert is_negative_control("broken:1")
        assert not is_negative_control("blaschke:0.5")

    @pytest.mark.parametrize("text,expected", [
        ("z", [0, 1]),
        ("1+z2", [1, 0, 1]),
        ("0.5*z3", [0, 0, 0, 0.5]),
        ("(1+2j)*z", [0, 1 + 2j]),
        ("-z+2", [2, -1]),
        ("1e-3*z", [0, 1e-3]),
        ("1-z", [1, -1]),
        ("z-z2", [0, 1, -1]),
        ("-z2", [0, 0, -1]),
        ("2.5e+1*z-1", [-1, 25]),
        ("1-(0.5-1j)*z", [1, -0.5 + 1j]),
    ])
    def test_parse_polynomial(self, text, expected):
        np.testing.assert_allclose(parse_polynomial(text), expected)

    @pytest.mark.parametrize("text", ["", "z-", "1+-z", "z3-x"])
    def test_malformed_polynomial(self, text):
        with pytest.raises(ZooError):
            parse_polynomial(text)

    def test_subtracted_term_in_id(self):
        field = resolve_map("holo:z-z2")
        np.testing.assert_allclose(field.value(2.0, 0.0), [-2.0, 0.0])

    def test_parse_complex_list(self):
        assert parse_complex_list("0.3, -0.2, 0.5+0.2j") == [0.3, -0.2, 0.5 + 0.2j]
        with pytest.raises(ZooError):
            parse_complex_list("0.3, x")

    def test_inline_blaschke(self):
        cmap = build_inline_map("twofold", {'kind': 'blaschke', 'factors': '0, 0.4'})
        assert isinstance(cmap, CircleMap)
        assert cmap.blaschke.factors == [0j, 0.4 + 0j]

    def test_inline_unknown_kind(self):
        with pytest.raises(ZooError):
            build_inline_map("x", {'kind': 'spiral'})


class TestCircleMaps:

    def test_identity(self):
        u = resolve_map("identity").grid(64)
        theta = theta_grid(64)
        np.testing.assert_allclose(u.samples, np.stack([np.cos(theta), np.sin(theta)], axis=1),
                                   atol=1e-15)
        assert u.sphere_valued

    def test_two_factor_blaschke_on_sphere(self):
        u = resolve_map("blaschke:0.3,-0.2").grid(256)
        np.testing.assert_allclose(np.linalg.norm(u.samples, axis=1), 1.0, atol=1e-15)

    def test_blaschke_with_phase(self):
        B = BlaschkeProduct([0.0], phase=np.pi / 2)
        np.testing.assert_allclose(B.on_circle(np.array([0.0])), [[0.0, 1.0]], atol=1e-15)

    def test_negative_control_flags(self):
        first = resolve_map("negctrl:1")
        assert first.negative_control and not first.sphere_valued
        second = negative_control(128, 2)
        assert second.sphere_valued

    def test_constant(self):
        u = constant_map([1.0, 0.0], 16)
        assert u.sphere_valued
        assert not constant_map([0.5, 0.0], 16).sphere_valued
        assert resolve_map("const:1,0").grid(16).sphere_valued

    def test_perturbation_is_deterministic(self, identity_1024):
        a = perturb_tangent(identity_1024, 0.1, seed=7)
        b = perturb_tangent(identity_1024, 0.1, seed=7)
        c = perturb_tangent(identity_1024, 0.1, seed=8)
        np.testing.assert_array_equal(a.samples, b.samples)
        assert not np.allclose(a.samples, c.samples)
        assert a.sphere_valued
        dev = np.max(np.linalg.norm(a.samples - identity_1024.samples, axis=1))
        assert 0 < dev <= 0.1

    def test_zero_amplitude_copies(self, identity_1024):
        u = perturb_tangent(identity_1024, 0.0)
        np.testing.assert_array_equal(u.samples, identity_1024.samples)

    def test_perturbation_needs_sphere(self):
        with pytest.raises(ZooError):
            perturb_tangent(resolve_map("negctrl:1").grid(64), 0.1)


def _fd_gradient(u, x, y, h=1e-5):
    dx = (u.value(x + h, y) - u.value(x - h, y)) / (2 * h)
    dy = (u.value(x, y + h) - u.value(x, y - h)) / (2 * h)
    return dx, dy


class TestPlanarMaps:

    def test_squared_gradient_of_z2(self):
        u = resolve_map("holo:z2")
        x = np.array([0.3, -1.0, 2.0])
        y = np.array([0.4, 0.5, -1.5])
        dx, dy = u.gradient(x, y)
        np.testing.assert_allclose(np.sum(dx ** 2 + dy ** 2, axis=-1), 8 * (x ** 2 + y ** 2))

    def test_constant_has_no_gradient(self):
        dx, dy = resolve_map("holo:3").gradient(np.array([0.2]), np.array([0.1]))
        assert np.all(dx == 0) and np.all(dy == 0)

    def test_linear_map_radial_and_angular(self):
        u = resolve_map("holo:z")
        phi = np.linspace(0, 2 * np.pi, 9)
        r = 1.7
        dx, dy = u.gradient(r * np.cos(phi), r * np.sin(phi))
        d_r = np.cos(phi)[:, None] * dx + np.sin(phi)[:, None] * dy
        d_tau = -np.sin(phi)[:, None] * dx + np.cos(phi)[:, None] * dy
        np.testing.assert_allclose(np.sum(d_r ** 2, axis=1), 1.0)
        np.testing.assert_allclose(np.sum(d_tau ** 2, axis=1), 1.0)

    @pytest.mark.parametrize("map_id", ["holo:z3", "holoreal:z2", "s2:z", "s2:z2", "broken:1"])
    def test_gradient_matches_finite_differences(self, map_id):
        u = resolve_map(map_id)
        x = np.array([0.3, -0.8, 1.1])
        y = np.array([0.5, 0.2, -0.7])
        dx, dy = u.gradient(x, y)
        fdx, fdy = _fd_gradient(u, x, y)
        np.testing.assert_allclose(dx, fdx, atol=1e-6)
        np.testing.assert_allclose(dy, fdy, atol=1e-6)

    def test_sphere_map_values(self):
        u = resolve_map("s2:z")
        x, y = np.meshgrid(np.linspace(-2, 2, 7), np.linspace(-2, 2, 7))
        np.testing.assert_allclose(np.linalg.norm(u.value(x, y), axis=-1), 1.0, atol=1e-12)
        np.testing.assert_allclose(u.value(0.0, 0.0), [0.0, 0.0, -1.0])

    def test_sphere_map_laplacian(self):
        u = resolve_map("s2:z")
        h = 1e-4
        x, y = 1.0, 0.5
        fd = (u.value(x + h, y) + u.value(x - h, y) + u.value(x, y + h) + u.value(x, y - h)
              - 4 * u.value(x, y)) / h ** 2
        np.testing.assert_allclose(u.laplacian(x, y), fd, atol=1e-5)

    def test_sphere_map_satisfies_hypothesis(self):
        u = resolve_map("s2:z")
        dx, dy = u.gradient(1.0, 0.5)
        lap = u.laplacian(1.0, 0.5)
        assert np.linalg.norm(lap) > 0.1
        assert abs(dx @ lap) <= 1e-8
        assert abs(dy @ lap) <= 1e-8

    def test_kinds(self):
        assert resolve_map("holoreal:z2").kind is PlanarMapKind.HARMONIC_FUNCTION
        assert resolve_map("s2:z").kind is PlanarMapKind.SPHERE_HARMONIC
        assert resolve_map("broken:1").kind is PlanarMapKind.GENERIC

    def test_translated(self):
        u = resolve_map("holo:z2")
        v = u.translated((0.2, -0.1))
        np.testing.assert_allclose(v.value(0.5, 0.5), u.value(0.7, 0.4))

    def test_monomial(self):
        np.testing.assert_allclose(monomial(3), [0, 0, 0, 1])
        with pytest.raises(ZooError):
            monomial(-1)

    def test_constructors_match_ids(self):
        np.testing.assert_allclose(holomorphic_planar([0, 0, 1]).value(0.3, 0.4),
                                   resolve_map("holo:z2").value(0.3, 0.4))
        np.testing.assert_allclose(meromorphic_to_s2([0, 1]).value(0.3, 0.4),
                                   resolve_map("s2:z").value(0.3, 0.4))

    def test_rational_sphere_map(self):
        inverse = meromorphic_to_s2([1.0], [0.0, 1.0])
        np.testing.assert_allclose(inverse.value(2.0, 0.0), resolve_map("s2:z").value(0.5, 0.0),
                                   atol=1e-14)
        x = np.array([0.7, -1.2])
        y = np.array([0.4, 0.9])
        dx, dy = inverse.gradient(x, y)
        fdx, fdy = _fd_gradient(inverse, x, y)
        np.testing.assert_allclose(dx, fdx, atol=1e-6)
        np.testing.assert_allclose(dy, fdy, atol=1e-6)
        assert hypothesis_residual(inverse, (0.5, 1.5, 0.5, 1.5)) <= 1e-8


def test_factor_near_circle_warns():
    from utils.warnings import ResolutionWarning

    with pytest.warns(ResolutionWarning):
        resolve_map("blaschke:0.95")
