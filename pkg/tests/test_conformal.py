"""Tests for Möbius maps, precomposition and the stereographic projection."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.conformal import (
    ConformalError, MobiusDisk, conformal_factor, mobius_apply,
    mobius_covariance_residual, pole_mask, precompose, pullback_halflap_check,
    stereographic, stereographic_inv, stereographic_jacobian, stereographic_point,
)
from core.kernels import pulled_back_G
from core.spectral import GridMap1D, analyze, half_energy, theta_grid


class TestMobiusDisk:

    def test_identity(self):
        M = MobiusDisk()
        z = np.exp(1j * theta_grid(8))
        np.testing.assert_allclose(M(z), z)
        assert M.is_identity

    def test_fixed_point(self):
        assert mobius_apply(MobiusDisk(0.0, 0.5), 1.0) == pytest.approx(1.0)

    def test_unit_circle_preserved(self):
        w = mobius_apply(MobiusDisk(0.0, 0.5), 1j)
        assert w == pytest.approx((1j - 0.5) / (1 - 0.5j))
        assert abs(w) == pytest.approx(1.0, abs=1e-15)

    def test_off_circle_input(self):
        with pytest.raises(ConformalError):
            mobius_apply(MobiusDisk(0.0, 0.5), 0.5)

    @pytest.mark.parametrize("a", [1.0, 1.2, 0.999999999])
    def test_parameter_outside_disk(self, a):
        with pytest.raises(ConformalError):
            MobiusDisk(0.0, a)

    def test_compose_with_inverse(self):
        M = MobiusDisk(0.7, 0.3 - 0.4j)
        N = M.compose(M.inverse())
        assert abs(N.a) < 1e-14
        assert np.mod(N.alpha + np.pi, 2 * np.pi) - np.pi == pytest.approx(0.0, abs=1e-14)

    def test_compose_matches_pointwise(self):
        M1, M2 = MobiusDisk(0.2, 0.4), MobiusDisk(-0.5, 0.1j)
        z = np.exp(1j * theta_grid(16))
        np.testing.assert_allclose(M1.compose(M2)(z), M1(M2(z)), atol=1e-14)

    @given(st.floats(-np.pi, np.pi), st.floats(-0.6, 0.6), st.floats(-0.6, 0.6),
           st.floats(-np.pi, np.pi), st.floats(-0.6, 0.6), st.floats(-0.6, 0.6))
    @settings(max_examples=50, deadline=None)
    def test_group_law(self, alpha1, x1, y1, alpha2, x2, y2):
        M1, M2 = MobiusDisk(alpha1, complex(x1, y1)), MobiusDisk(alpha2, complex(x2, y2))
        z = np.exp(1j * theta_grid(32))
        np.testing.assert_allclose(M1.compose(M2)(z), M1(M2(z)), atol=1e-12)
        np.testing.assert_allclose(M1.compose(M2).inverse()(M1(M2(z))), z, atol=1e-12)

    def test_dict_round_trip(self):
        M = MobiusDisk(0.3, 0.5 + 0.2j)
        assert MobiusDisk.from_dict(M.to_dict()) == M


class TestConformalFactor:

    def test_trivial(self):
        np.testing.assert_allclose(conformal_factor(MobiusDisk(), theta_grid(8)), 1.0)

    def test_values(self):
        M = MobiusDisk(0.0, 0.5)
        assert conformal_factor(M, 0.0) == pytest.approx(3.0)
        assert conformal_factor(M, np.pi) == pytest.approx(1.0 / 3.0)

    def test_matches_finite_difference(self):
        M = MobiusDisk(0.4, 0.3 + 0.2j)
        theta = np.linspace(0.1, 6.0, 40)
        h = 1e-5
        fd = (M.boundary_angle(theta + h) - M.boundary_angle(theta - h)) / (2 * h)
        np.testing.assert_allclose(conformal_factor(M, theta), np.abs(fd), atol=1e-6)

    def test_integrates_to_two_pi(self):
        theta = theta_grid(256)
        total = np.mean(conformal_factor(MobiusDisk(0.0, 0.5), theta)) * 2 * np.pi
        assert total == pytest.approx(2 * np.pi, rel=1e-12)


class TestPrecompose:

    def test_identity_map(self, identity_1024):
        M = MobiusDisk(0.0, 0.5)
        w = precompose(identity_1024, M)
        exact = M(np.exp(1j * identity_1024.theta))
        np.testing.assert_allclose(w.samples[:, 0], exact.real, atol=1e-12)
        np.testing.assert_allclose(w.samples[:, 1], exact.imag, atol=1e-12)
        assert w.sphere_valued

    def test_scalar(self, scalar_map):
        M = MobiusDisk(0.0, 0.3)
        u = scalar_map(np.cos, 256)
        w = precompose(u, M)
        exact = np.cos(np.angle(M(np.exp(1j * u.theta))))
        np.testing.assert_allclose(w.samples[:, 0], exact, atol=1e-12)

    def test_identity_mobius_copies(self, identity_1024):
        w = precompose(identity_1024, MobiusDisk())
        assert w is not identity_1024
        np.testing.assert_array_equal(w.samples, identity_1024.samples)

    @pytest.mark.parametrize("map_id", ["identity", "blaschke:0.3,-0.2", "negctrl:2"])
    def test_group_law(self, circle_grid, map_id):
        u = circle_grid(map_id, 2048)
        M1, M2 = MobiusDisk(0.3, 0.2), MobiusDisk(-0.4, 0.25j)
        stepwise = precompose(precompose(u, M1), M2).samples
        assert np.max(np.abs(stepwise - precompose(u, M1.compose(M2)).samples)) <= 1e-10
        assert np.max(np.abs(stepwise - precompose(u, M2.compose(M1)).samples)) > 1e-3

    @pytest.mark.parametrize("map_id", ["identity", "blaschke:0.5", "negctrl:1", "negctrl:2"])
    def test_energy_preserved(self, circle_grid, map_id):
        u = circle_grid(map_id, 2048)
        w = precompose(u, MobiusDisk(0.5, 0.3 - 0.2j))
        assert half_energy(analyze(w)) == pytest.approx(half_energy(analyze(u)), rel=1e-8)


class TestStereographic:

    def test_values(self):
        assert stereographic(np.pi / 2) == pytest.approx(0.0, abs=1e-15)
        assert stereographic(0.0) == pytest.approx(1.0)
        assert stereographic_inv(0.0) == pytest.approx(1j)
        assert stereographic_inv(1.0) == pytest.approx(1.0 + 0j)

    def test_pole(self):
        with pytest.raises(ConformalError):
            stereographic(-np.pi / 2)
        with pytest.raises(ConformalError):
            stereographic_point(-1j)

    def test_inverse(self):
        x = np.array([-50.0, -2.0, -0.3, 0.0, 0.7, 4.0, 1e3])
        back = stereographic_point(stereographic_inv(x))
        np.testing.assert_allclose(back, x, rtol=1e-12)

    @given(st.floats(min_value=-np.pi / 2 + 0.01, max_value=3 * np.pi / 2 - 0.01))
    @settings(max_examples=100, deadline=None)
    def test_angle_round_trip(self, theta):
        np.testing.assert_allclose(stereographic_inv(stereographic(theta)), np.exp(1j * theta),
                                   atol=1e-12)

    @given(st.floats(min_value=-1e4, max_value=1e4, allow_nan=False))
    @settings(max_examples=100, deadline=None)
    def test_point_round_trip(self, x):
        assert stereographic_point(stereographic_inv(x)) == pytest.approx(x, rel=1e-12, abs=1e-12)

    def test_jacobian(self):
        theta = np.array([0.0, 0.4, 2.0])
        h = 1e-6
        fd = (stereographic(theta + h) - stereographic(theta - h)) / (2 * h)
        np.testing.assert_allclose(stereographic_jacobian(theta), np.abs(fd), rtol=1e-6)

    def test_pole_mask(self):
        mask = pole_mask(1024)
        assert not mask[3 * 1024 // 4]
        assert mask[0]


class TestKernelPullback:

    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_half_laplacian_of_pulled_back_kernel(self, t):
        report = pullback_halflap_check(t, 2048)
        assert report.passed, report.rel_gap

    def test_constant_map(self):
        report = pullback_halflap_check(v=GridMap1D(np.full(1024, 3.0)), rhs=np.zeros(1024),
                                        map_id="const")
        assert report.passed, report.rel_gap
        assert report.rhs == 0.0
        assert report.params['map'] == "const"

    def test_sampled_pullback(self):
        theta = theta_grid(2048)
        near, far = pulled_back_G(1.0, theta), pulled_back_G(2.0, theta, 0.3)
        v = GridMap1D(np.stack([near.value, far.value], axis=1))
        rhs = -np.stack([near.d_dt, far.d_dt], axis=1)
        assert pullback_halflap_check(v=v, rhs=rhs).passed
        assert not pullback_halflap_check(v=v, rhs=-rhs).passed

    def test_sampled_pullback_needs_rhs(self):
        v = GridMap1D(np.ones(64))
        with pytest.raises(ConformalError):
            pullback_halflap_check(v=v)
        with pytest.raises(ConformalError):
            pullback_halflap_check(v=v, rhs=np.zeros(32))


class TestCovariance:

    @pytest.mark.parametrize("a", [0.3, 0.5])
    def test_identity(self, circle_grid, a):
        report = mobius_covariance_residual(circle_grid("identity", 2048), MobiusDisk(0.0, a))
        assert report.passed, report.rel_gap

    def test_two_factor_blaschke(self, circle_grid):
        report = mobius_covariance_residual(circle_grid("blaschke:0.3,-0.2", 4096),
                                            MobiusDisk(0.0, 0.4), tol=1e-7)
        assert report.passed, report.rel_gap

    def test_scalar_input(self):
        u = GridMap1D(np.cos(2 * theta_grid(512)))
        report = mobius_covariance_residual(u, MobiusDisk(0.0, 0.3))
        assert report.passed, report.rel_gap
