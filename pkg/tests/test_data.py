import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymprofile.analysis import compute_L, compute_M
from asymprofile.checks import random_datum
from asymprofile.data import (
    AnalyticDatum,
    Term,
    TermKind,
    ab_at,
    default_grid,
    ft_at,
    grid_datum_from_samples,
    moments,
    symmetry_of,
)

SQRT2PI = math.sqrt(2 * math.pi)


# transforms


def test_unit_gaussian_transform_at_zero():
    assert ft_at(AnalyticDatum.gaussian(1), [0.0]) == pytest.approx(SQRT2PI, rel=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ft_at_zero_is_mass_exactly(n):
    rng = np.random.default_rng(n)
    datum = random_datum(rng, n)
    assert ft_at(datum, np.zeros(n)) == datum.mass


def test_dipole_transform_vanishes_at_zero():
    assert ft_at(AnalyticDatum.dipole(3, axis=2, center=(1, 0, 0)), np.zeros(3)) == 0


def test_shift_is_pure_phase():
    base = AnalyticDatum.gaussian(1)
    shifted = AnalyticDatum.gaussian(1, center=(1.0,))
    xi = [math.pi]
    assert abs(ft_at(shifted, xi)) == pytest.approx(abs(ft_at(base, xi)), rel=1e-15)
    assert ft_at(shifted, xi) == pytest.approx(-ft_at(base, xi), rel=1e-14)


def test_gaussian_transform_closed_form():
    datum = AnalyticDatum.gaussian(2, 0.7, center=(0.3, -1.0), width=1.3)
    xi = np.array([0.4, -2.1])
    expected = 0.7 * (2 * math.pi) * 1.3**2 * math.exp(-0.5 * 1.3**2 * xi @ xi) * np.exp(-1j * xi @ [0.3, -1.0])
    assert ft_at(datum, xi) == pytest.approx(expected, rel=1e-14)


def test_dipole_transform_is_derivative():
    # the transform of d/dx_k f is i xi_k f_hat
    g = AnalyticDatum.gaussian(2, 1.5, center=(0.5, 0.2), width=0.8)
    d = AnalyticDatum.dipole(2, axis=1, amplitude=1.5, center=(0.5, 0.2), width=0.8)
    xi = np.array([1.1, -0.7])
    assert ft_at(d, xi) == pytest.approx(1j * xi[1] * ft_at(g, xi), rel=1e-14)


def test_physical_values_match_dipole_derivative():
    g = AnalyticDatum.gaussian(1, 2.0, center=(0.3,), width=0.9)
    d = AnalyticDatum.dipole(1, amplitude=2.0, center=(0.3,), width=0.9)
    x = np.linspace(-3, 3, 13)[:, None]
    h = 1e-6
    fd = (g(x + h) - g(x - h)) / (2 * h)
    np.testing.assert_allclose(d(x), fd, atol=1e-8)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_linearity(seed):
    rng = np.random.default_rng(seed)
    a, b = random_datum(rng, 2), random_datum(rng, 2)
    xi = rng.normal(size=(5, 2))
    np.testing.assert_allclose((2.0 * a + b).ft(xi), 2 * a.ft(xi) + b.ft(xi), rtol=1e-13, atol=1e-14)


def test_term_validation():
    with pytest.raises(ValueError):
        Term(1.0, (0.0,), 0.0)
    with pytest.raises(ValueError):
        Term(1.0, (0.0, 0.0), 1.0, TermKind.DIPOLE, axis=2)
    with pytest.raises(ValueError):
        AnalyticDatum(2, (Term(1.0, (0.0,), 1.0),))


# moments


def test_unit_gaussian_moments():
    m = moments(AnalyticDatum.gaussian(1))
    assert m.mass == pytest.approx(SQRT2PI, rel=1e-15)
    assert m.abs_first_moment == pytest.approx(2.0, rel=1e-10)
    assert m.l1 == pytest.approx(SQRT2PI, rel=1e-10)
    assert m.weighted_11 == pytest.approx(2.0 + SQRT2PI, rel=1e-10)
    assert m.l2 == pytest.approx(math.pi**0.25, rel=1e-10)
    assert m.grad_l2 == pytest.approx(math.pi**0.25 / math.sqrt(2), rel=1e-10)
    assert m.converged


@pytest.mark.parametrize("n, first", [(2, math.sqrt(2) * math.pi**1.5), (3, 8 * math.pi)])
def test_first_moment_higher_dimensions(n, first):
    assert moments(AnalyticDatum.gaussian(n)).abs_first_moment == pytest.approx(first, rel=1e-9)


def test_dipole_mass_zero_and_moments_positive():
    m = moments(AnalyticDatum.dipole(2, axis=0, center=(1.0, 0.0)))
    assert m.mass == 0.0
    assert m.abs_first_moment > 0 and m.l2 > 0 and m.converged


def test_dipole_first_moment_closed_form():
    # f = -x e^{-x^2/2}: int |x| |f| = 2 int x^2 e^{-x^2/2} = sqrt(2 pi)
    m = moments(AnalyticDatum.dipole(1))
    assert m.abs_first_moment == pytest.approx(SQRT2PI, rel=1e-10)
    assert m.l1 == pytest.approx(2.0, rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_moment_invariants(seed):
    rng = np.random.default_rng(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        m = moments(random_datum(rng, int(rng.integers(1, 3))))
    assert m.weighted_11 >= m.abs_first_moment >= 0
    assert m.weighted_11 >= m.l1 >= abs(m.mass) - 1e-9 * (1 + m.l1)
    assert all(math.isfinite(v) for v in (m.mass, m.abs_first_moment, m.weighted_11, m.l2, m.grad_l2))


def test_zero_datum_moments():
    m = moments(AnalyticDatum.zero(3))
    assert (m.mass, m.abs_first_moment, m.l2) == (0.0, 0.0, 0.0)


# A and B


def test_ab_at_zero_frequency():
    assert ab_at(random_datum(np.random.default_rng(0), 2), np.zeros(2)) == (0.0, 0.0)


def test_ab_example():
    a, b = ab_at(AnalyticDatum.gaussian(1), [0.1])
    assert a == pytest.approx(SQRT2PI * math.expm1(-0.005), rel=1e-10)
    assert a == pytest.approx(-0.0125018606759329, rel=1e-10)
    assert abs(b) < 1e-15


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ab_reconstructs_transform(n):
    rng = np.random.default_rng(10 + n)
    for _ in range(5):
        datum = random_datum(rng, n)
        xi = rng.normal(size=n)
        a, b = ab_at(datum, xi)
        assert complex(a, -b) + datum.mass == pytest.approx(ft_at(datum, xi), abs=1e-10)


def test_even_datum_has_no_sine_part():
    datum = AnalyticDatum.gaussian(3, 2.0, width=0.6)
    _, b = ab_at(datum, [0.3, 1.2, -0.4])
    assert abs(b) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bounds_on_a_and_b(seed):
    rng = np.random.default_rng(seed)
    datum = random_datum(rng, int(rng.integers(1, 3)))
    xi = rng.normal(size=datum.n) * 10 ** rng.uniform(-2, 0.5)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        a, b = ab_at(datum, xi)
        first = moments(datum).abs_first_moment
    k = np.linalg.norm(xi)
    assert abs(a) <= compute_L() * k * first + 1e-9
    assert abs(b) <= compute_M() * k * first + 1e-9
    assert abs(ft_at(datum, xi) - datum.mass) <= (compute_L() + compute_M()) * k * first + 1e-9


# symmetry and default grids


def test_symmetry_classes():
    assert symmetry_of(AnalyticDatum.gaussian(3))[0] == "radial"
    kind, axis = symmetry_of(AnalyticDatum.gaussian(3, center=(0, 2.0, 0)), AnalyticDatum.dipole(3, axis=1))
    assert kind == "axial" and np.allclose(np.abs(axis), [0, 1, 0])
    assert symmetry_of(AnalyticDatum.gaussian(2, center=(1, 0)), AnalyticDatum.gaussian(2, center=(0, 1)))[0] == "general"


def test_default_grid_radius():
    assert default_grid(AnalyticDatum.gaussian(2)).R == 10.0
    assert default_grid(AnalyticDatum.gaussian(2, width=0.5)).R == 20.0
    assert default_grid(AnalyticDatum.gaussian(2, width=5.0)).R == 8.0


# sampled data


def test_grid_datum_matches_analytic_gaussian():
    x = np.arange(-10, 10 + 1e-12, 0.05)
    datum = grid_datum_from_samples(np.exp(-(x**2) / 2), x)
    assert ft_at(datum, [0.0]).real == pytest.approx(SQRT2PI, abs=1e-8)
    xi = np.array([[0.3], [1.7]])
    np.testing.assert_allclose(datum.ft(xi), AnalyticDatum.gaussian(1).ft(xi), atol=1e-8)


def test_grid_datum_zero_samples():
    datum = grid_datum_from_samples(np.zeros((8, 8)), 0.5)
    assert np.all(datum.ft(np.ones((3, 2))) == 0)


def test_grid_datum_symmetric_bump_has_no_sine_part():
    x = np.linspace(-1, 1, 41)
    bump = np.where(np.abs(x) < 1, np.exp(-1 / np.maximum(1 - x**2, 1e-300)), 0.0)
    datum = grid_datum_from_samples(bump, x)
    _, b = ab_at(datum, [2.3])
    assert abs(b) < 1e-12


def test_grid_datum_moments_riemann():
    h = 0.02
    x = np.arange(-12, 12 + 1e-12, h)
    m = moments(grid_datum_from_samples(np.exp(-(x**2) / 2), h))
    # |x| is kinked at the origin, so the Riemann sum is only O(h^2) there
    assert m.abs_first_moment == pytest.approx(2.0, abs=h**2)
    assert m.l2 == pytest.approx(math.pi**0.25, rel=1e-6)
    assert m.grad_l2 == pytest.approx(math.pi**0.25 / math.sqrt(2), rel=1e-3)


def test_grid_datum_rejects_non_uniform_spacing():
    x = np.array([0.0, 0.1, 0.3, 0.4])
    with pytest.raises(ValueError):
        grid_datum_from_samples(np.ones(4), x)


def test_grid_datum_rejects_high_dimension():
    with pytest.raises(ValueError):
        grid_datum_from_samples(np.ones((2, 2, 2, 2)), 1.0)
