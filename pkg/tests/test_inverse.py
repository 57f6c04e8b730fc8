import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from layerscatter.errors import ConfigError, DataInconsistencyError, DomainError
from layerscatter.forward import ReflectionSeries, forward_scatter, reflection_coefficients
from layerscatter.inverse import (MAX_SHORT_RANGE_ORDER, add_noise, born_invert,
                                  coefficients_from_moments, invert_scatter, layer_strip,
                                  moments_from_data, short_range_gamma, short_range_invert,
                                  strip_first_interface, verblunsky_from_moments)
from layerscatter.media import ImpedanceProfile, Interval, StepMedium
from layerscatter.moebius import apply, step_reflection, step_reflection_composed

verblunsky = st.lists(st.floats(-0.9, 0.9), min_size=1, max_size=40)


@given(verblunsky)
def test_moments_round_trip(r):
    a = reflection_coefficients(r)
    m = moments_from_data(a)
    np.testing.assert_allclose(coefficients_from_moments(m), a, atol=1e-12)


@given(verblunsky)
def test_reflectivities_recovered_from_moments(r):
    # rounding is amplified by about 1/prod(1 - r^2)^2
    cond = float(np.prod(1 - np.square(r)))
    assume(cond >= 1e-4)
    m = moments_from_data(reflection_coefficients(r))
    np.testing.assert_allclose(verblunsky_from_moments(m), r, atol=1e-14 / cond ** 2)


def test_ill_conditioned_lists_lose_accuracy():
    # exact data of a valid list, but prod(1 - r^2) ~ 1e-6: float64 keeps few digits
    rng = np.random.default_rng(0)
    r = rng.uniform(-0.9, 0.9, 40)
    r = r[np.cumprod(1 - r * r) > 1e-6]
    got = verblunsky_from_moments(moments_from_data(reflection_coefficients(r)))
    assert np.max(np.abs(got - r)) > 1e-10


def test_moments_are_geometric_for_single_coefficient():
    # R = a z gives R/(1 - R) = sum a^k z^k
    np.testing.assert_allclose(moments_from_data([0.3, 0, 0, 0]), 0.3 ** np.arange(5))


def test_inconsistent_data_report_the_step():
    with pytest.raises(DataInconsistencyError) as info:
        verblunsky_from_moments(moments_from_data([0.5, 0.9, 0.0]))
    assert info.value.step == 2
    r = verblunsky_from_moments(moments_from_data([0.5, 0.9, 0.0]), strict=False)
    np.testing.assert_allclose(r, [0.5])
    with pytest.raises(ConfigError):
        verblunsky_from_moments([2.0, 0.1])


def test_lenient_inversion_records_truncation():
    s = ReflectionSeries(0.1, [0.5, 0.9, 0.0], singular=True)
    out = invert_scatter(s, strict=False)
    assert out.n == 1 and out.diagnostics["truncated_at"] == 2


def test_zero_data_give_constant_impedance():
    t = 0.2 * np.arange(1, 11)
    out = invert_scatter((t, np.zeros(10)), zeta0=2.5)
    np.testing.assert_array_equal(out.zeta, 2.5)
    np.testing.assert_allclose(out.y, 0.1 * np.arange(1, 11))


def test_raw_samples_validation():
    with pytest.raises(ConfigError):
        invert_scatter((np.array([0.1, 0.3]), np.zeros(2)))
    with pytest.raises(ConfigError):
        invert_scatter((np.array([0.1]), np.zeros(1)), zeta0=0.0)


@pytest.mark.parametrize("n", [100, 500, 2000])
def test_round_trip_on_exponential(n):
    p = ImpedanceProfile.exponential(0.3, 0, 4, zeta0=1.5)
    data = forward_scatter(p, n=n)
    out = invert_scatter(data, zeta0=float(p.zeta(0.5 * data.delta)))
    np.testing.assert_allclose(out.zeta, p.zeta(out.midpoints), rtol=1e-10)
    assert out.diagnostics["moment_residual"] < 1e-12


def test_round_trip_of_step_medium():
    m = StepMedium.from_reflectivities(Interval(0, 1), (0.25, 0.5, 0.75), [0.3, -0.2, 0.5])
    data = forward_scatter(m, n=3)
    out = invert_scatter(data)
    np.testing.assert_allclose(out.reflectivities, [0.3, -0.2, 0.5], atol=1e-14)
    np.testing.assert_allclose(out.medium().values, m.values, rtol=1e-13)


def test_born_inversion_of_weak_profile():
    p = ImpedanceProfile.exponential(1e-3, 0, 2)
    y, z = born_invert(forward_scatter(p, n=200))
    np.testing.assert_allclose(z, p.zeta(y) / p.zeta(y[0]), rtol=1e-6)


def test_noise_is_reproducible_and_scaled():
    v = np.sin(np.linspace(0, 10, 5000))
    a, b = add_noise(v, 0.1, 7), add_noise(v, 0.1, 7)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, add_noise(v, 0.1, 8))
    rms = math.sqrt(np.mean(v * v))
    assert np.std(a - v) == pytest.approx(0.1 * rms, rel=0.05)


class TestLayerStrip:
    medium = StepMedium.from_reflectivities(Interval(0, 3), (0.7, 1.2, 2.1),
                                            [0.3, -0.4, 0.25], zeta0=2.0)

    def test_exact(self):
        out = layer_strip(self.medium, zeta0=2.0)
        assert out.complete
        np.testing.assert_allclose(out.jumps, self.medium.jumps, atol=1e-12)
        np.testing.assert_allclose(out.reflectivities, [0.3, -0.4, 0.25], atol=1e-12)

    def test_numeric(self):
        m = self.medium
        out = layer_strip(lambda om, xi: step_reflection(m, om), x0=0.0, zeta0=2.0,
                          band=100.0, lambda_max=5.0)
        np.testing.assert_allclose(out.jumps, m.jumps, atol=1e-4)
        np.testing.assert_allclose(out.reflectivities, [0.3, -0.4, 0.25], rtol=1e-2)
        assert out.tolerance is not None and out.band == 100.0

    def test_numeric_needs_band(self):
        with pytest.raises(ConfigError):
            layer_strip(lambda om, xi: om, x0=0.0)

    def test_first_interface_removal_gives_tail(self):
        m = self.medium
        for om in (0.3, 2.0, -5.1):
            got = strip_first_interface(m, om)
            xi = 0.1 + 0.2j
            assert apply(got, xi) == pytest.approx(
                step_reflection_composed(m.tail(), om, xi), abs=1e-12)


class TestShortRange:
    def test_gamma(self):
        assert short_range_gamma(0.0, 0.0) == math.inf
        assert short_range_gamma(0.05, 0.0025) == pytest.approx(
            (1 - math.tanh(0.05)) ** 2 / 0.01)

    def test_zero_data_return_zeta0(self):
        t = 0.02 * np.arange(1, 101)
        assert short_range_invert((t, np.zeros(100)), 0.0, 3.0, 0.0, 0.0, 0.5) == 3.0

    def test_exponential(self):
        p = ImpedanceProfile.exponential(0.05, 0, 1)
        data = forward_scatter(p, n=400)
        for y in (0.25, 0.5, 0.9):
            got = short_range_invert(data, None, 1.0, 0.05, 0.0025, y, order=4)
            assert got == pytest.approx(float(p.zeta(y)), rel=1e-3)

    def test_terms_shrink_geometrically(self):
        p = ImpedanceProfile.exponential(0.05, 0, 1)
        _, terms = short_range_invert(forward_scatter(p, n=400), None, 1.0, 0.05, 0.0025, 0.9,
                                      order=6, return_terms=True)
        mags = np.abs(terms[1:])
        assert np.all(mags[1:] < 0.5 * mags[:-1])

    def test_agrees_with_exact_inversion(self):
        p = ImpedanceProfile.chirp(5, 30, c=0.01)
        l1, l2 = p.alpha_norms()
        data = forward_scatter(p, n=2000)
        exact = invert_scatter(data, zeta0=1.0)
        y = 5.5
        k = int(round((y - 5) / data.delta)) - 1
        got = short_range_invert(data, None, 1.0, l1, l2, y, order=6)
        assert got == pytest.approx(exact.zeta[k], rel=5e-3)

    def test_refusals(self):
        p = ImpedanceProfile.exponential(0.05, 0, 1)
        data = forward_scatter(p, n=50)
        with pytest.raises(ConfigError):
            short_range_invert(data, None, 1.0, 0.05, 0.0025, 0.5,
                               order=MAX_SHORT_RANGE_ORDER + 1)
        with pytest.raises(DomainError):
            short_range_invert(data, None, 1.0, 5.0, 5.0, 0.5)
        with pytest.raises(DomainError):
            short_range_invert(data, None, 1.0, 0.05, 0.0025, 0.5, first_jump=0.3)
