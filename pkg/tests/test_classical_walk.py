"""Legendre pipeline against quadrature and grid ring-average oracles."""

import math

import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss, legval
from scipy.special import eval_legendre

from drfsim import (
    AccuracyError,
    DomainError,
    LegendreSpectrum,
    SpinLabel,
    WalkParameters,
    angular_variance,
    classical_fidelity,
    classical_fidelity_series,
    closed_form_fidelity,
    fitted_step,
    initial_spectrum,
    ring_average,
    walk_evolve,
)


def fidelity_by_quadrature(spec):
    """Independent route: integrate p(theta) cos^2(theta/2) over the sphere."""
    x, w = leggauss(spec.l_max + 8)
    p = legval(x, spec.coeffs)
    return float(0.5 * np.sum(w * p * (1.0 + x) / 2.0))


class TestInitialSpectrum:
    def test_c0_is_exactly_one(self):
        spec = initial_spectrum(SpinLabel(5))
        assert spec.coeffs[0] == 1.0

    def test_c1_spin_one(self):
        spec = initial_spectrum(SpinLabel(2))
        assert spec.coeffs[1] == pytest.approx(2.0, abs=1e-10)

    def test_c1_spin_half(self):
        spec = initial_spectrum(SpinLabel(1))
        assert spec.coeffs[1] == pytest.approx(1.5, abs=1e-10)

    @pytest.mark.parametrize("twice_j", [1, 2, 7, 16, 40])
    def test_c1_closed_form(self, twice_j):
        spec = initial_spectrum(SpinLabel(twice_j))
        assert spec.coeffs[1] == pytest.approx(
            3.0 * twice_j / (twice_j + 1.0), abs=1e-10
        )

    def test_reconstruction_matches_profile(self):
        twice_j = 12
        spec = initial_spectrum(SpinLabel(twice_j))
        theta = np.linspace(0.0, math.pi, 500)
        exact = (2.0 * twice_j + 1.0) * np.cos(theta / 2.0) ** (4 * twice_j)
        assert np.max(np.abs(spec.reconstruct(theta) - exact)) < 1e-9

    def test_initial_distribution_is_positive(self):
        spec = initial_spectrum(SpinLabel(20))
        spec.require_positive()

    def test_l_max_too_small_rejected(self):
        with pytest.raises(DomainError):
            initial_spectrum(SpinLabel(2), l_max=0)

    def test_spectrum_type_rejects_bad_c0(self):
        with pytest.raises(DomainError):
            LegendreSpectrum(2, np.array([0.9, 0.1, 0.0]))


class TestWalkEvolve:
    def test_zero_angle_is_identity(self):
        spec = initial_spectrum(SpinLabel(4))
        walked = walk_evolve(spec, WalkParameters(0.0, 17))
        assert np.array_equal(walked.coeffs, spec.coeffs)

    def test_normalisation_preserved(self):
        spec = initial_spectrum(SpinLabel(4))
        walked = walk_evolve(spec, WalkParameters(0.7, 300))
        assert walked.coeffs[0] == 1.0

    def test_c1_decays_as_cosine_power(self):
        spec = initial_spectrum(SpinLabel(6))
        alpha, n = 0.3, 25
        walked = walk_evolve(spec, WalkParameters(alpha, n))
        assert walked.coeffs[1] == pytest.approx(
            spec.coeffs[1] * math.cos(alpha) ** n, rel=1e-13
        )

    def test_spectral_decay(self):
        spec = initial_spectrum(SpinLabel(8))
        for alpha in (0.1, 0.5, 1.0, 2.5):
            walked = walk_evolve(spec, WalkParameters(alpha, 3))
            assert np.all(np.abs(walked.coeffs[1:]) <= np.abs(spec.coeffs[1:]) + 1e-15)

    def test_parameter_validation(self):
        with pytest.raises(DomainError):
            WalkParameters(-0.1, 1)
        with pytest.raises(DomainError):
            WalkParameters(math.pi + 0.1, 1)
        with pytest.raises(DomainError):
            WalkParameters(0.5, -1)


class TestClassicalFidelity:
    def test_uniform_distribution_is_coin_toss(self):
        coeffs = np.zeros(65)
        coeffs[0] = 1.0
        assert classical_fidelity(LegendreSpectrum(64, coeffs)) == 0.5

    def test_point_distribution_is_ideal(self):
        # truncated expansion of a delta at theta = 0: c_l = 2l + 1
        l_max = 32
        coeffs = 2.0 * np.arange(l_max + 1) + 1.0
        assert classical_fidelity(LegendreSpectrum(l_max, coeffs)) == pytest.approx(
            1.0, abs=1e-15
        )

    @pytest.mark.parametrize("twice_j", [1, 3, 10, 24])
    def test_initial_fidelity_matches_quantum_start(self, twice_j):
        spec = initial_spectrum(SpinLabel(twice_j))
        expected = 0.5 + (twice_j / 2.0) / (twice_j + 1.0)
        assert classical_fidelity(spec) == pytest.approx(expected, abs=1e-10)
        assert classical_fidelity(spec) == pytest.approx(
            closed_form_fidelity(SpinLabel(twice_j), 0), abs=1e-10
        )

    @pytest.mark.parametrize("alpha,n", [(0.0, 0), (0.4, 7), (1.2, 40)])
    def test_coefficient_route_equals_quadrature_route(self, alpha, n):
        spec = walk_evolve(initial_spectrum(SpinLabel(9)), WalkParameters(alpha, n))
        assert classical_fidelity(spec) == pytest.approx(
            fidelity_by_quadrature(spec), abs=1e-10
        )


class TestFittedStep:
    def test_half_spin_is_sixty_degrees(self):
        assert fitted_step(SpinLabel(1)) == pytest.approx(math.pi / 3.0, abs=1e-14)

    def test_spin_ten(self):
        assert fitted_step(SpinLabel(20)) == pytest.approx(
            math.acos(1.0 - 2.0 / 441.0), abs=1e-15
        )

    @pytest.mark.parametrize("twice_j", [100, 150, 200])
    def test_large_spin_scales_as_inverse_j(self, twice_j):
        alpha = fitted_step(SpinLabel(twice_j))
        assert alpha * (twice_j + 1.0) / 2.0 == pytest.approx(1.0, rel=1e-2)


class TestRingAverage:
    def test_uniform_distribution_is_invariant(self):
        thetas = np.linspace(0.0, math.pi, 4096)
        out = ring_average(thetas, np.ones_like(thetas), 0.8)
        assert np.max(np.abs(out - 1.0)) < 1e-14

    def test_first_legendre_mode_scales_by_cosine(self):
        thetas = np.linspace(0.0, math.pi, 16384)
        alpha = 0.6
        values = np.cos(thetas)
        out = ring_average(thetas, values, alpha)
        assert np.max(np.abs(out - math.cos(alpha) * values)) < 1e-8

    @pytest.mark.parametrize("ell", [2, 5, 8])
    def test_eigenoperator_property(self, ell):
        thetas = np.linspace(0.0, math.pi, 32768)
        alpha = 0.5
        values = eval_legendre(ell, np.cos(thetas))
        out = ring_average(thetas, values, alpha)
        want = eval_legendre(ell, math.cos(alpha)) * values
        assert np.max(np.abs(out - want)) < 1e-7

    def test_point_mass_spreads_to_ring(self):
        n = 8192
        thetas = np.linspace(0.0, math.pi, n)
        alpha = 0.9
        spike = np.zeros(n)
        spike[0] = 1.0
        out = ring_average(thetas, spike, alpha)
        peak = thetas[np.argmax(out)]
        assert abs(peak - alpha) < 5.0 * (math.pi / n)
        # all mass sits within a narrow band around the ring
        band = np.abs(thetas - alpha) < 0.02
        assert out[~band].max() <= 1e-12

    def test_coarse_grid_rejected(self):
        thetas = np.linspace(0.0, math.pi, 512)
        with pytest.raises(AccuracyError):
            ring_average(thetas, np.ones_like(thetas), 0.5)

    def test_alpha_bounds_rejected(self):
        thetas = np.linspace(0.0, math.pi, 2048)
        for alpha in (0.0, math.pi):
            with pytest.raises(DomainError):
                ring_average(thetas, np.ones_like(thetas), alpha)


class TestFidelitySeries:
    def test_fitted_step_reproduces_quantum_decay(self):
        j = SpinLabel(10)
        series = classical_fidelity_series(j, fitted_step(j), 300)
        quantum = closed_form_fidelity(j, series.steps)
        assert np.max(np.abs(series.fidelity - quantum)) <= 1e-10

    def test_right_angle_kick_erases_information(self):
        series = classical_fidelity_series(SpinLabel(6), math.pi / 2.0, 5)
        assert np.max(np.abs(series.fidelity[1:] - 0.5)) < 1e-12

    def test_zero_angle_keeps_fidelity_constant(self):
        j = SpinLabel(6)
        series = classical_fidelity_series(j, 0.0, 5)
        start = 0.5 + j.j / (2.0 * j.j + 1.0)
        assert np.max(np.abs(series.fidelity - start)) < 1e-10


class TestAngularSpread:
    def test_variance_matches_coherent_state_at_large_spin(self):
        var = angular_variance(SpinLabel(200))
        assert 0.95 <= var * 200 <= 1.05

    def test_variance_within_five_percent_from_forty(self):
        for twice_j in (40, 64, 120):
            var = angular_variance(SpinLabel(twice_j))
            assert abs(var * twice_j - 1.0) < 0.05

    def test_small_spin_variance_is_finite_positive(self):
        var = angular_variance(SpinLabel(1))
        assert 0.0 < var < math.pi**2

    def test_gaussian_profile_approximation(self):
        twice_j = 200
        j = twice_j / 2.0
        theta = np.linspace(0.0, j ** (-0.25), 2001)
        profile = np.cos(theta / 2.0) ** (4 * twice_j)
        gaussian = np.exp(-j * theta**2)
        assert np.max(np.abs(profile - gaussian)) < 0.02


class TestWalkPositivity:
    @pytest.mark.parametrize("twice_j", [1, 4, 12, 40])
    def test_reconstructions_stay_positive_along_fitted_walk(self, twice_j):
        j = SpinLabel(twice_j)
        spec = initial_spectrum(j)
        gains = eval_legendre(
            np.arange(spec.l_max + 1), math.cos(fitted_step(j))
        )
        steps = np.arange(0, 10 * (twice_j / 2.0) ** 2 + 1, dtype=int)
        grid = np.cos(np.linspace(0.0, math.pi, 4096))
        from numpy.polynomial.legendre import legvander

        basis = legvander(grid, spec.l_max)
        # columns: p^(n) on the grid for every n at once
        values = basis @ (spec.coeffs[:, None] * (gains[:, None] ** steps[None, :]))
        assert values.min() >= -1e-6
