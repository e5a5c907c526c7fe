"""Exact Fourier-space solutions and Gauss-profile residuals.

The solution is never time-stepped: at each frequency node it is the
symbol applied to the transformed data.  The residual against the Gauss
profile is formed in Fourier space and reduced with Plancherel.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .data import default_grid
from .quadrature import SpectralField, band_l2_sq, l2_norm
from .spectral import Band, dw_propagators, heat_multiplier

__all__ = [
    "Equation",
    "EvolutionProblem",
    "band_residuals",
    "evolve",
    "residual_norm",
    "residual_spectrum",
]


class Equation(enum.Enum):
    HEAT = "heat"
    DAMPED_WAVE = "damped_wave"


@dataclass(frozen=True, eq=False)
class EvolutionProblem:
    """Heat problem with data ``(v0,)`` or damped wave problem with ``(u0, u1)``.

    If ``grid`` is omitted a :class:`RadialGrid` matched to the data is built.
    """

    equation: Equation
    data: tuple
    grid: object = None

    def __post_init__(self):
        equation = Equation(self.equation)
        object.__setattr__(self, "equation", equation)
        data = tuple(self.data)
        object.__setattr__(self, "data", data)
        expected = 1 if equation is Equation.HEAT else 2
        if len(data) != expected:
            raise ValueError(f"{equation.value} needs {expected} datum(s), got {len(data)}")
        if any(d.n != data[0].n for d in data):
            raise ValueError("data dimensions differ")
        if self.grid is None:
            object.__setattr__(self, "grid", default_grid(*data))
        if self.grid.n != data[0].n:
            raise ValueError("grid dimension does not match the data")

    @classmethod
    def heat(cls, v0, grid=None):
        return cls(Equation.HEAT, (v0,), grid)

    @classmethod
    def damped_wave(cls, u0, u1, grid=None):
        return cls(Equation.DAMPED_WAVE, (u0, u1), grid)

    @property
    def n(self) -> int:
        return self.data[0].n

    @cached_property
    def transforms(self):
        """Data transforms at the grid nodes (computed once)."""
        return tuple(d.ft(self.grid.nodes) for d in self.data)

    @property
    def profile_mass(self) -> float:
        """``P0`` for heat, ``P00 + P01`` for damped wave (used even when zero)."""
        return float(sum(d.mass for d in self.data))

    def scaled(self, factor: float) -> "EvolutionProblem":
        return EvolutionProblem(self.equation, tuple(factor * d for d in self.data), self.grid)


def _check_time(t, strict):
    if not np.isfinite(t) or t < 0 or (strict and t == 0):
        raise ValueError(f"time must be {'positive' if strict else 'nonnegative'}, got {t!r}")


def evolve(problem: EvolutionProblem, t: float) -> SpectralField:
    """Transformed solution at time ``t`` on the problem grid."""
    _check_time(t, strict=False)
    xi2 = problem.grid.xi2
    if problem.equation is Equation.HEAT:
        (v0,) = problem.transforms
        values = v0 * heat_multiplier(t, xi2)
    else:
        u0, u1 = problem.transforms
        m0, m1 = dw_propagators(t, xi2)
        values = m0 * u0 + m1 * u1
    return SpectralField(problem.grid, np.broadcast_to(values, problem.grid.shape).copy(), t)


def residual_spectrum(problem: EvolutionProblem, t: float) -> SpectralField:
    """``u_hat(t) - P exp(-t |xi|^2)`` on the problem grid."""
    _check_time(t, strict=True)
    field = evolve(problem, t)
    profile = problem.profile_mass * heat_multiplier(t, problem.grid.xi2)
    return SpectralField(problem.grid, field.values - profile, t)


def residual_norm(problem: EvolutionProblem, t: float) -> float:
    """``||u(t) - P G(t)||_2`` via Plancherel."""
    return l2_norm(residual_spectrum(problem, t))


def band_residuals(problem: EvolutionProblem, t: float):
    """Squared residual norm split over the LOW, MID and HIGH bands."""
    field = residual_spectrum(problem, t)
    return tuple(band_l2_sq(field, band) for band in (Band.LOW, Band.MID, Band.HIGH))
