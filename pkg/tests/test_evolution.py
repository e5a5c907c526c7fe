import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymprofile.data import AnalyticDatum
from asymprofile.evolution import (
    Equation,
    EvolutionProblem,
    band_residuals,
    evolve,
    residual_norm,
    residual_spectrum,
)
from asymprofile.quadrature import AngularRule, RadialGrid, TensorGrid
from asymprofile.spectral import dw_propagators


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("t", [0.0, 0.5, 7.0])
def test_heat_semigroup(n, t):
    problem = EvolutionProblem.heat(AnalyticDatum.gauss_kernel(n, 1.0))
    field = evolve(problem, t)
    np.testing.assert_allclose(field.values, np.exp(-(1 + t) * problem.grid.xi2) * np.ones(field.values.shape), atol=1e-14)


def test_damped_wave_at_t0_returns_u0():
    u0 = AnalyticDatum.gaussian(2, center=(0.5, 0.0))
    u1 = AnalyticDatum.dipole(2, axis=0)
    problem = EvolutionProblem.damped_wave(u0, u1)
    assert np.array_equal(evolve(problem, 0.0).values, problem.transforms[0])


@pytest.mark.parametrize("t", [0.3, 2.0, 25.0])
def test_damped_wave_zero_frequency(t):
    u0 = AnalyticDatum.gaussian(1, 0.8)
    u1 = AnalyticDatum.gaussian(1, -0.3, width=2.0)
    grid = RadialGrid(1)
    problem = EvolutionProblem.damped_wave(u0, u1, grid)
    origin = np.zeros((1, 1))
    # evaluate the solution formula directly at xi = 0
    m0, m1 = dw_propagators(t, 0.0)
    value = m0 * u0.ft(origin)[0] + m1 * u1.ft(origin)[0]
    assert value == pytest.approx(u0.mass + (1 - math.exp(-t)) * u1.mass, rel=1e-14)
    residual = value - problem.profile_mass
    assert residual == pytest.approx(-math.exp(-t) * u1.mass, rel=1e-12)


def test_heat_residual_vanishes_at_low_frequency():
    problem = EvolutionProblem.heat(AnalyticDatum.gauss_kernel(2, 1.0, mass=3.0))
    field = residual_spectrum(problem, 5.0)
    # the innermost Gauss node sits at |xi| ~ 1e-11
    assert abs(field.values[0, 0]) < 1e-12


def test_residual_of_pure_profile_equals_shifted_kernel():
    # heat with v0 = G(1, .): residual is G(1+t) - G(t)
    problem = EvolutionProblem.heat(AnalyticDatum.gauss_kernel(1, 1.0))
    assert residual_norm(problem, 1.0) == pytest.approx(0.12158753288218107, rel=1e-10)
    assert residual_norm(problem, 2.0) == pytest.approx(0.062440853416399, rel=1e-10)


@pytest.mark.parametrize("equation", list(Equation))
def test_zero_data_give_zero_residual(equation):
    zero = AnalyticDatum.zero(2)
    problem = EvolutionProblem(equation, (zero,) if equation is Equation.HEAT else (zero, zero))
    assert residual_norm(problem, 3.0) == 0.0
    assert band_residuals(problem, 3.0) == (0.0, 0.0, 0.0)


def test_problem_validation():
    with pytest.raises(ValueError):
        EvolutionProblem(Equation.DAMPED_WAVE, (AnalyticDatum.gaussian(1),))
    with pytest.raises(ValueError):
        EvolutionProblem.damped_wave(AnalyticDatum.gaussian(1), AnalyticDatum.gaussian(2))
    with pytest.raises(ValueError):
        EvolutionProblem.heat(AnalyticDatum.gaussian(2), RadialGrid(3))


def test_time_validation():
    problem = EvolutionProblem.heat(AnalyticDatum.gaussian(1))
    with pytest.raises(ValueError):
        evolve(problem, -1.0)
    with pytest.raises(ValueError):
        residual_spectrum(problem, 0.0)


# at small t the profile exp(-t R^2) is not yet negligible at the default R
@pytest.mark.filterwarnings("ignore::asymprofile.quadrature.TruncationWarning")
@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 1e3), st.floats(-5, 5).filter(lambda a: abs(a) > 1e-3))
def test_residual_norm_is_homogeneous(t, scale):
    u0 = AnalyticDatum.gaussian(2, center=(1.0, 0.0))
    u1 = AnalyticDatum.gaussian(2, 0.5)
    problem = EvolutionProblem.damped_wave(u0, u1)
    assert residual_norm(problem.scaled(scale), t) == pytest.approx(abs(scale) * residual_norm(problem, t), rel=1e-12)


@pytest.mark.parametrize("t", [0.5, 5.0, 200.0])
def test_bands_add_up_to_norm(t):
    u0 = AnalyticDatum.gaussian(3, center=(0, 0, 1.0))
    u1 = AnalyticDatum.dipole(3, axis=2, amplitude=0.4)
    problem = EvolutionProblem.damped_wave(u0, u1)
    low, mid, high = band_residuals(problem, t)
    assert low + mid + high == pytest.approx(residual_norm(problem, t) ** 2, rel=1e-12)


def test_radial_and_tensor_grids_agree():
    u0 = AnalyticDatum.gaussian(2, center=(0.7, 0.0))
    u1 = AnalyticDatum.gaussian(2, 0.5)
    radial = EvolutionProblem.damped_wave(u0, u1)
    tensor = EvolutionProblem.damped_wave(u0, u1, TensorGrid(2, 10.0, 512))
    for t in (0.5, 3.0):
        assert residual_norm(tensor, t) == pytest.approx(residual_norm(radial, t), rel=1e-6)


def test_axial_grid_matches_product_grid():
    u0 = AnalyticDatum.gaussian(3, center=(0.0, 1.5, 0.0))
    u1 = AnalyticDatum.dipole(3, axis=1, amplitude=0.3)
    axial = EvolutionProblem.damped_wave(u0, u1)
    product = RadialGrid(3, axial.grid.R, angular=AngularRule.product(3, 48))
    general = EvolutionProblem.damped_wave(u0, u1, product)
    for t in (1.0, 30.0):
        assert residual_norm(general, t) == pytest.approx(residual_norm(axial, t), rel=1e-10)


def test_general_data_in_two_dimensions():
    u0 = AnalyticDatum.gaussian(2, center=(1.0, 0.0))
    u1 = AnalyticDatum.gaussian(2, 0.5, center=(0.0, 1.0))
    problem = EvolutionProblem.damped_wave(u0, u1)
    assert problem.grid.angular.kind == "product"
    tensor = EvolutionProblem.damped_wave(u0, u1, TensorGrid(2, 10.0, 512))
    assert residual_norm(problem, 2.0) == pytest.approx(residual_norm(tensor, 2.0), rel=1e-6)
