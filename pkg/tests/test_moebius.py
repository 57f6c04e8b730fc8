import cmath

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from layerscatter.errors import DomainError
from layerscatter.media import Interval, StepMedium
from layerscatter.moebius import (IDENTITY, Auto, Constant, apply, compose, from_matrix,
                                  homog_matrix, invert, step_reflection,
                                  step_reflection_composed, step_reflection_map,
                                  transfer_product)

angles = st.floats(-np.pi, np.pi)
radii = st.floats(0.0, 0.95)


@st.composite
def autos(draw):
    return Auto(cmath.exp(1j * draw(angles)),
                draw(radii) * cmath.exp(1j * draw(angles)))


@st.composite
def disk_points(draw):
    return draw(st.floats(0.0, 0.99)) * cmath.exp(1j * draw(angles))


def test_validation():
    with pytest.raises(DomainError):
        Auto(2.0, 0.0)
    with pytest.raises(DomainError):
        Auto(1.0, 1.0)
    with pytest.raises(DomainError):
        Constant(0.5)
    with pytest.raises(DomainError):
        apply(IDENTITY, 1.5)


def test_single_jump_formula():
    f = Auto(1j, 0.3)
    xi = 0.2 - 0.1j
    assert apply(f, xi) == pytest.approx(1j * (xi + 0.3) / (1 + 0.3 * xi))


@given(autos(), autos(), disk_points())
def test_compose_matches_nested_application(f, g, xi):
    assert apply(compose(f, g), xi) == pytest.approx(apply(f, apply(g, xi)), abs=1e-10)


@given(autos(), autos())
def test_compose_matches_matrix_product(f, g):
    h = from_matrix(homog_matrix(f) @ homog_matrix(g))
    c = compose(f, g)
    assert h.mu == pytest.approx(c.mu, abs=1e-10)
    assert h.rho == pytest.approx(c.rho, abs=1e-10)


@given(autos(), disk_points())
def test_inverse(f, xi):
    assert apply(invert(f), apply(f, xi)) == pytest.approx(xi, abs=1e-9)
    assert apply(compose(invert(f), f), xi) == pytest.approx(xi, abs=1e-9)


@given(autos(), disk_points())
def test_maps_preserve_the_disk(f, xi):
    assert abs(apply(f, xi)) < 1.0 + 1e-12


def test_constant_maps():
    s = Constant(1j)
    assert apply(s, 0.3) == 1j
    assert compose(Auto(-1.0, 0.0), s).sigma == pytest.approx(-1j)
    assert compose(s, Auto(1.0, 0.5)) is s
    with pytest.raises(DomainError):
        invert(s)


def _random_medium(rng, n):
    jumps = np.sort(rng.uniform(0.05, 2.95, n))
    r = rng.uniform(-0.8, 0.8, n)
    return StepMedium.from_reflectivities(Interval(0, 3), tuple(jumps), r)


@pytest.mark.parametrize("n", [1, 3, 12, 70])
def test_matrix_product_equals_nested_composition(n):
    rng = np.random.default_rng(n)
    m = _random_medium(rng, n)
    om = rng.uniform(-20, 20, 25)
    got = step_reflection(m, om)
    want = [step_reflection_composed(m, w) for w in om]
    np.testing.assert_allclose(got, want, atol=1e-10)
    xi = 0.4 - 0.3j
    g = step_reflection_map(m, om[0])
    assert apply(g, xi) == pytest.approx(step_reflection_composed(m, om[0], xi), abs=1e-10)


def test_single_jump_reflection():
    m = StepMedium(Interval(0, 2), (0.5,), (1.0, 3.0))
    om = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(step_reflection(m, om), -0.5 * np.exp(1j * om), atol=1e-15)


def test_reflection_has_modulus_below_one():
    rng = np.random.default_rng(5)
    m = _random_medium(rng, 40)
    R = step_reflection(m, np.linspace(-50, 50, 2001))
    assert np.all(np.abs(R) < 1.0)


def test_transfer_shape_and_boundary_columns():
    m = StepMedium(Interval(0, 2), (0.5,), (1.0, 3.0))
    p = transfer_product(m, np.zeros((2, 3)))
    assert p.shape == (2, 3, 2, 2)
    b = transfer_product(m, np.array([0.7]), with_boundary=True)[0]
    # bordered second column holds the harmonic exponentials of zeta and 1/zeta
    mu_r = -0.5 * np.exp(2j * 0.5 * 0.7)
    assert b[0, 1] / b[1, 1] == pytest.approx((1 + mu_r) / (1 - mu_r), abs=1e-14)
