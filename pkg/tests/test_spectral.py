"""Tests for the spectral core: analysis, synthesis and Fourier multipliers."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.identities.circle import stationarity_report
from core.spectral import (
    GridMap1D, SpectralError, Spectrum, analyze, chop, complex_coefficients,
    evaluate, fractional_laplacian, half_energy, half_laplacian_samples,
    integrate_s1, max_retained_mode, rotate_theta, synthesize, tail_fraction,
    theta_derivative, theta_grid, winding_number,
)
from core.zoo import BlaschkeProduct, blaschke_trace


class TestGridMap:

    def test_scalar_samples_become_one_column(self):
        u = GridMap1D(np.ones(8))
        assert u.samples.shape == (8, 1)
        assert u.m == 1

    @pytest.mark.parametrize("N", [3, 6, 12, 100])
    def test_rejects_grid_that_is_not_power_of_two(self, N):
        with pytest.raises(SpectralError):
            GridMap1D(np.zeros(N))

    def test_rejects_non_finite(self):
        samples = np.zeros(8)
        samples[3] = np.nan
        with pytest.raises(SpectralError):
            GridMap1D(samples)

    def test_sphere_flag_is_checked(self):
        with pytest.raises(SpectralError):
            GridMap1D(np.full((8, 2), 0.5), sphere_valued=True)


class TestAnalysis:

    def test_cosine(self, scalar_map):
        S = analyze(scalar_map(np.cos, 8))
        assert S.mode(1)[0] == pytest.approx(0.5, abs=1e-15)
        assert S.mode(-1)[0] == pytest.approx(0.5, abs=1e-15)
        assert abs(S.mode(2)[0]) < 1e-15

    def test_identity_map(self, identity_1024):
        c1 = analyze(identity_1024).mode(1)
        assert c1[0] == pytest.approx(0.5, abs=1e-14)
        assert c1[1] == pytest.approx(-0.5j, abs=1e-14)

    def test_constant(self):
        S = analyze(GridMap1D(np.tile([0.3, -0.7], (16, 1))))
        np.testing.assert_allclose(S.mode(0), [0.3, -0.7], atol=1e-15)
        assert max_retained_mode(chop(S)) == 0

    def test_blaschke_geometric_coefficients(self):
        u = blaschke_trace(BlaschkeProduct([0.5]), 256)
        w = complex_coefficients(analyze(u))
        half = u.N // 2
        assert w[half] == pytest.approx(-0.5, abs=1e-14)
        for k in range(1, 20):
            assert w[half + k] == pytest.approx(0.75 * 0.5 ** (k - 1), abs=1e-14)
            assert abs(w[half - k]) < 1e-14

    def test_nyquist_is_split(self, scalar_map):
        S = analyze(scalar_map(lambda t: np.cos(4 * t), 8))
        assert S.mode(4)[0] == pytest.approx(0.5)
        assert S.mode(-4)[0] == pytest.approx(0.5)

    def test_spectrum_shape_checked(self):
        with pytest.raises(SpectralError):
            Spectrum(np.zeros(8), 8)


class TestSynthesis:

    def test_blaschke_round_trip(self):
        u = blaschke_trace(BlaschkeProduct([0.5]), 256)
        back = synthesize(analyze(u))
        assert np.max(np.abs(back.samples - u.samples)) <= 1e-13

    def test_cosine_from_coefficients(self):
        coeffs = np.zeros(9, dtype=complex)
        coeffs[4 + 1] = 0.5
        coeffs[4 - 1] = 0.5
        u = synthesize(Spectrum(coeffs, 8))
        np.testing.assert_allclose(u.samples[:, 0], np.cos(theta_grid(8)), atol=1e-15)

    def test_refuses_grid_too_small(self):
        S = analyze(GridMap1D(np.cos(3 * theta_grid(16))))
        with pytest.raises(SpectralError):
            synthesize(S, 4)

    def test_evaluate_off_grid(self):
        u = blaschke_trace(BlaschkeProduct([0.3]), 128)
        phi = np.array([0.1, 1.234, 5.0])
        exact = BlaschkeProduct([0.3]).on_circle(phi)
        np.testing.assert_allclose(evaluate(analyze(u), phi), exact, atol=1e-13)

    def test_rotation(self, scalar_map):
        S = analyze(scalar_map(np.cos, 16))
        rotated = synthesize(rotate_theta(S, 0.4))
        np.testing.assert_allclose(rotated.samples[:, 0], np.cos(theta_grid(16) + 0.4), atol=1e-14)


class TestMultipliers:

    def test_half_laplacian_eigenfunctions(self, scalar_map):
        for n in (1, 3):
            u = scalar_map(lambda t: np.cos(n * t), 32)
            Hu = half_laplacian_samples(u)[:, 0]
            np.testing.assert_allclose(Hu, n * np.cos(n * u.theta), atol=1e-13)

    def test_half_laplacian_of_constant(self):
        Hu = half_laplacian_samples(GridMap1D(np.full(16, 2.5)))
        assert np.max(np.abs(Hu)) < 1e-14

    def test_quarter_order_supported(self, scalar_map):
        u = scalar_map(lambda t: np.cos(4 * t), 32)
        out = synthesize(fractional_laplacian(analyze(u), 0.25))
        np.testing.assert_allclose(out.samples[:, 0], 2.0 * np.cos(4 * u.theta), atol=1e-13)

    def test_unsupported_order(self, scalar_map):
        with pytest.raises(SpectralError):
            fractional_laplacian(analyze(scalar_map(np.cos)), 0.3)

    def test_derivative_zeroes_nyquist(self, scalar_map):
        u = scalar_map(lambda t: np.cos(4 * t), 8)
        du = synthesize(theta_derivative(analyze(u)))
        assert np.max(np.abs(du.samples)) < 1e-14

    def test_derivative_resolved(self, scalar_map):
        u = scalar_map(lambda t: np.cos(4 * t), 16)
        du = synthesize(theta_derivative(analyze(u)))
        np.testing.assert_allclose(du.samples[:, 0], -4 * np.sin(4 * u.theta), atol=1e-13)

    @pytest.mark.parametrize("map_id", ["identity", "blaschke:0.3,-0.2", "negctrl:1", "negctrl:2"])
    def test_derivative_commutes_with_half_laplacian(self, circle_grid, map_id):
        S = analyze(circle_grid(map_id, 256))
        one = synthesize(theta_derivative(fractional_laplacian(S, 0.5))).samples
        other = synthesize(fractional_laplacian(theta_derivative(S), 0.5)).samples
        assert np.max(np.abs(one - other)) <= 1e-12 * np.max(np.abs(one))


class TestEnergy:

    def test_identity(self, identity_1024):
        assert half_energy(analyze(identity_1024)) == pytest.approx(2 * np.pi, rel=1e-13)

    def test_mean(self):
        u = blaschke_trace(BlaschkeProduct([0.5]), 1024)
        np.testing.assert_allclose(integrate_s1(u), [-np.pi, 0.0], atol=1e-13)

    def test_winding(self):
        u = blaschke_trace(BlaschkeProduct([0.3, -0.2]), 512)
        assert winding_number(u) == pytest.approx(2.0, abs=1e-12)

    def test_tail_of_zero_map(self):
        assert tail_fraction(analyze(GridMap1D(np.zeros(8)))) == 0.0

    @pytest.mark.parametrize("map_id", ["identity", "blaschke:0.5", "blaschke:0.3,-0.2", "negctrl:1"])
    def test_parseval(self, circle_grid, map_id):
        u = circle_grid(map_id, 512)
        S = analyze(u)
        mass = integrate_s1(GridMap1D(np.sum(u.samples ** 2, axis=1)))[0]
        assert mass == pytest.approx(2 * np.pi * np.sum(np.abs(S.coeffs) ** 2), rel=1e-12)

        quarter = synthesize(fractional_laplacian(S, 0.25)).samples
        energy = integrate_s1(GridMap1D(np.sum(quarter ** 2, axis=1)))[0]
        assert half_energy(S) == pytest.approx(energy, rel=1e-12)

    @given(st.integers(min_value=0, max_value=255))
    @settings(max_examples=25, deadline=None)
    def test_rotation_on_grid(self, shift):
        u = blaschke_trace(BlaschkeProduct([0.3, -0.2]), 256)
        S = analyze(u)
        rotated = rotate_theta(S, 2 * np.pi * shift / 256)
        assert half_energy(rotated) == pytest.approx(half_energy(S), rel=1e-12)
        np.testing.assert_allclose(synthesize(rotated).samples, np.roll(u.samples, -shift, axis=0),
                                   atol=1e-13)

    @given(st.floats(min_value=-0.6, max_value=0.6), st.floats(min_value=-0.6, max_value=0.6))
    @settings(max_examples=25, deadline=None)
    def test_single_factor_energy_is_two_pi(self, re, im):
        a = complex(re, im)
        if abs(a) > 0.8:
            a *= 0.8 / abs(a)
        u = blaschke_trace(BlaschkeProduct([a]), 512)
        assert half_energy(analyze(u)) == pytest.approx(2 * np.pi, rel=1e-10)

    @given(st.lists(st.floats(min_value=-0.5, max_value=0.5), min_size=1, max_size=3))
    @settings(max_examples=20, deadline=None)
    def test_energy_counts_degree(self, factors):
        u = blaschke_trace(BlaschkeProduct(factors), 512)
        assert half_energy(analyze(u)) == pytest.approx(2 * np.pi * len(factors), rel=1e-10)


def test_stationarity_converges_with_grid():
    previous = None
    for N in (64, 128, 256, 512, 1024):
        gap = stationarity_report(blaschke_trace(BlaschkeProduct([0.5]), N)).rel_gap
        if previous is not None and previous > 1e-12:
            assert gap <= previous / 10.0 or gap <= 1e-12
        previous = gap
    assert previous <= 1e-12
