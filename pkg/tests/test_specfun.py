import math

import numpy as np
import pytest
import sympy as sp

from layerscatter.errors import ConfigError, DomainError, NumericError, ResourceCapError
from layerscatter.forward import spectrum
from layerscatter.media import ImpedanceProfile, Interval, StepMedium
from layerscatter.moebius import step_reflection, step_reflection_composed
from layerscatter.specfun import (ap_series, besicovitch_coefficient, besicovitch_scan,
                                  classical_trace_check, laplace_beltrami_check,
                                  scattering_polynomial, singular_trace)


def _generating_coefficient(p, q, z):
    """Coefficient of w^q in ((w + z)/(1 + conj(z) w))^p, exactly."""
    w = sp.symbols("w")
    ser = sp.series(((w + z) / (1 + sp.conjugate(z) * w)) ** p, w, 0, q + 1).removeO()
    return complex(sp.N(ser.coeff(w, q), 30))


class TestScatteringPolynomial:
    def test_low_orders(self):
        z = 0.3 - 0.4j
        assert scattering_polynomial(0, 0, z) == 1
        assert scattering_polynomial(3, 0, z) == pytest.approx(z ** 3)
        assert scattering_polynomial(1, 1, z) == pytest.approx(1 - abs(z) ** 2)
        assert scattering_polynomial(0, 2, z) == 0
        assert scattering_polynomial(-1, 2, z) == 0

    @pytest.mark.parametrize("q", [1, 2, 5, 9])
    def test_first_row(self, q):
        r = 0.35
        assert scattering_polynomial(1, q, r) == pytest.approx((1 - r * r) * (-r) ** (q - 1),
                                                               rel=1e-14)

    @pytest.mark.parametrize("p,q", [(1, 3), (3, 1), (2, 5), (4, 3), (5, 5), (6, 2), (12, 9)])
    def test_against_generating_function(self, p, q):
        z = sp.Rational(3, 10) + sp.I / 10
        got = scattering_polynomial(p, q, complex(z))
        assert got == pytest.approx(_generating_coefficient(p, q, z), rel=1e-12, abs=1e-15)

    def test_high_order_real_argument(self):
        r = sp.Rational(-7, 10)
        got = scattering_polynomial(20, 18, -0.7)
        assert isinstance(got, float)
        assert got == pytest.approx(_generating_coefficient(20, 18, r).real, rel=1e-11)

    def test_array_input_and_order_cap(self):
        z = np.array([0.1, 0.5, -0.2])
        np.testing.assert_allclose(scattering_polynomial(2, 1, z),
                                   [scattering_polynomial(2, 1, v) for v in z])
        with pytest.raises(DomainError):
            scattering_polynomial(21, 20, 0.1)

    def test_laplace_beltrami_eigenfunction(self):
        z = 0.3 + 0.1j
        coarse = laplace_beltrami_check(4, 3, z, h=1e-2)
        fine = laplace_beltrami_check(4, 3, z, h=5e-3)
        assert coarse / fine == pytest.approx(4.0, rel=0.1)
        assert laplace_beltrami_check(2, 1, z) < 1e-5
        with pytest.raises(DomainError):
            laplace_beltrami_check(2, 1, 0.999, h=1e-2)


def _three_layers():
    return StepMedium.from_reflectivities(Interval(0, 2), (0.7, 1.1, 1.6), [0.3, -0.45, 0.2])


class TestAPSeries:
    def test_single_jump(self):
        m = StepMedium(Interval(0, 2), (0.5,), (1.0, 3.0))
        s = ap_series(m, lambda_max=10)
        assert len(s.terms) == 1
        assert s.terms[0][0] == pytest.approx(1.0)
        assert s.terms[0][1] == pytest.approx(-0.5)

    def test_lowest_term_is_first_reflectivity(self):
        m = _three_layers()
        lam, c = ap_series(m, lambda_max=5).terms[0]
        assert lam == pytest.approx(1.4) and c == pytest.approx(0.3)

    def test_converges_to_reflection(self):
        m = _three_layers()
        om = np.linspace(-30, 30, 801)
        R = step_reflection(m, om)
        gaps = [np.linalg.norm(ap_series(m, lambda_max=lm)(om) - R) / np.linalg.norm(R)
                for lm in (5, 10, 20, 30)]
        assert np.all(np.diff(gaps) < 0)
        assert gaps[-1] < 1e-9

    def test_free_end_argument(self):
        m = _three_layers()
        xi = 0.2 - 0.3j
        s = ap_series(m, xi, lambda_max=25)
        for om in (0.0, 1.3, -7.2):
            assert s(om) == pytest.approx(step_reflection_composed(m, om, xi), abs=1e-7)

    def test_energy_is_bounded_and_grows(self):
        m = _three_layers()
        norms = [ap_series(m, lambda_max=lm).norm2() for lm in (3, 6, 12, 24)]
        assert np.all(np.diff(norms) >= 0)
        assert norms[-1] <= 1.0

    def test_commensurate_widths_merge(self):
        m = StepMedium.equally_spaced(Interval(0, 4), [0.3, -0.2, 0.1])
        s = ap_series(m, lambda_max=12)
        np.testing.assert_allclose(s.lambdas, 2.0 * np.arange(1, 7))
        om = np.linspace(-3, 3, 13)
        assert np.all(np.diff(s.lambdas) > 0)
        full = ap_series(m, lambda_max=80)(om)
        np.testing.assert_allclose(full, step_reflection(m, om), atol=1e-10)

    def test_cap(self):
        m = _three_layers()
        with pytest.raises(ResourceCapError):
            ap_series(m, lambda_max=30, cap=100)
        with pytest.raises(DomainError):
            ap_series(m, xi=1.0)


class TestMeans:
    om = np.linspace(-200, 200, 40001)

    def test_coefficient_of_a_known_sum(self):
        f = 0.3 * np.exp(2j * self.om) + 0.1 * np.exp(5j * self.om)
        val, half = besicovitch_coefficient(self.om, f, 2.0)
        assert half == 200.0
        assert val == pytest.approx(0.3, abs=1e-3)
        # leakage from the other terms decays like 1/L
        assert abs(besicovitch_coefficient(self.om, f, 3.5)[0]) < 2e-3

    def test_scan_finds_lowest_frequency(self):
        f = 0.05 * np.exp(1.7j * self.om) + 0.4 * np.exp(4.2j * self.om)
        lam, c, floor = besicovitch_scan(self.om, f, 10.0)
        assert lam == pytest.approx(1.7, abs=1e-6)
        assert c == pytest.approx(0.05, abs=1e-4)
        assert besicovitch_scan(self.om, np.zeros_like(self.om), 10.0) is None

    def test_grid_must_be_uniform(self):
        with pytest.raises(ConfigError):
            besicovitch_coefficient(np.array([0.0, 1.0, 3.0]), np.ones(3), 1.0)


class TestTraces:
    def test_constant_medium(self):
        om = np.linspace(-10, 10, 101)
        assert singular_trace(om, np.zeros(101)) == (0.0, 10.0)

    def test_two_jumps(self):
        r = np.array([0.3, -0.4])
        m = StepMedium.from_reflectivities(Interval(0, 3), (1.0, 2.3), r)
        om = np.linspace(-1000, 1000, 400001)
        val, _ = singular_trace(om, step_reflection(m, om))
        assert val == pytest.approx(-np.sum(np.log(1 - r * r)), rel=0.05)

    def test_rejects_total_reflection(self):
        with pytest.raises(DomainError):
            singular_trace(np.linspace(0, 1, 5), np.ones(5))

    def test_classical_inequality(self):
        p = ImpedanceProfile.exponential(0.2, 0, 3)
        om = np.linspace(-60, 60, 4001)
        x = np.linspace(0, 3, 301)
        lhs, rhs = classical_trace_check(om, spectrum(p, om, n=3000), x, p.alpha(x))
        assert 0 < lhs <= rhs * (1 + 1e-3)
        with pytest.raises(NumericError):
            classical_trace_check(om, spectrum(p, om, n=3000), x, 0.1 * p.alpha(x))

    def test_bessel_tail(self):
        # energy of the lowest terms never exceeds the trace of the whole medium
        m = _three_layers()
        s = ap_series(m, lambda_max=20)
        assert s.norm2() <= -np.sum(np.log(1 - m.reflectivities ** 2))
        assert math.isfinite(s.norm2())
