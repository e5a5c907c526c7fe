"""Frequency grids and Plancherel-based L2 integration.

Transforms follow the prefactor-free convention
``f_hat(xi) = int exp(-i x.xi) f(x) dx``, so that ``f_hat(0)`` is the mass
of ``f`` and Plancherel reads ``||f||^2 = (2 pi)^-n int |f_hat|^2 dxi``.
Every norm in this module applies the ``(2 pi)^-n`` factor.

Two grids are provided:

* :class:`RadialGrid` - Gauss-Legendre panels in ``r = |xi|`` on ``[0, R]``
  times an :class:`AngularRule` on the unit sphere.  Works in any dimension
  for radial and axially symmetric integrands.
* :class:`TensorGrid` - uniform FFT-compatible grid for ``n <= 3``, used for
  physical-space reconstruction and Plancherel cross-checks.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.special import gamma, roots_jacobi, roots_legendre

from .spectral import Band, band_mask

__all__ = [
    "AngularRule",
    "RadialGrid",
    "SpectralField",
    "TensorGrid",
    "TruncationWarning",
    "band_l2_sq",
    "l2_norm",
    "radial_l2",
    "sphere_area",
    "tensor_inverse_transform",
    "tensor_l2",
]

# last-panel share of the total above which truncation is reported
TAIL_FRACTION_LIMIT = 1e-8
MIN_NODES_PER_PANEL = 8


class TruncationWarning(UserWarning):
    """The outermost radial panel carries a non-negligible share of a norm."""


def sphere_area(n: int) -> float:
    """Surface measure ``2 pi^(n/2) / Gamma(n/2)`` of the unit sphere in R^n."""
    if int(n) != n or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n!r}")
    return float(2.0 * math.pi ** (n / 2) / gamma(n / 2))


def _unit(v):
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("axis must be nonzero")
    return v / norm


def _perpendicular(d):
    """Some unit vector orthogonal to ``d`` (len(d) >= 2)."""
    k = int(np.argmin(np.abs(d)))
    e = np.zeros_like(d)
    e[k] = 1.0
    p = e - (e @ d) * d
    return p / np.linalg.norm(p)


@dataclass(frozen=True, eq=False)
class AngularRule:
    """Quadrature on the unit sphere ``S^(n-1)``.

    ``directions`` has shape ``(m, n)``; ``weights`` sum to
    :func:`sphere_area`.  A rule is only exact for the integrand class it was
    built for (see the constructors).
    """

    n: int
    directions: np.ndarray
    weights: np.ndarray
    kind: str

    @classmethod
    def radial(cls, n: int) -> "AngularRule":
        """One direction carrying the whole sphere; exact for radial integrands."""
        d = np.zeros((1, n))
        d[0, 0] = 1.0
        return cls(n, d, np.array([sphere_area(n)]), "radial")

    @classmethod
    def axial(cls, n: int, axis, order: int = 32) -> "AngularRule":
        """Exact for integrands depending only on ``|xi|`` and ``xi . axis``.

        With ``mu = cos(angle to axis)`` the sphere measure is
        ``omega_(n-2) (1 - mu^2)^((n-3)/2) dmu``, so Gauss-Jacobi nodes with
        ``alpha = beta = (n-3)/2`` integrate the remaining 1-D problem.
        """
        d = _unit(axis)
        if d.size != n:
            raise ValueError("axis length must equal the dimension")
        if n == 1:
            return cls(1, np.array([[1.0], [-1.0]]), np.array([1.0, 1.0]), "axial")
        a = (n - 3) / 2
        mu, w = roots_jacobi(order, a, a)
        p = _perpendicular(d)
        dirs = mu[:, None] * d[None, :] + np.sqrt(1.0 - mu**2)[:, None] * p[None, :]
        return cls(n, dirs, w * sphere_area(n - 1), "axial")

    @classmethod
    def product(cls, n: int, order: int = 32) -> "AngularRule":
        """Full product rule for general integrands, ``n <= 3``."""
        if n == 1:
            return cls(1, np.array([[1.0], [-1.0]]), np.array([1.0, 1.0]), "product")
        nphi = 2 * order
        phi = 2 * np.pi * np.arange(nphi) / nphi
        wphi = np.full(nphi, 2 * np.pi / nphi)
        if n == 2:
            dirs = np.stack([np.cos(phi), np.sin(phi)], axis=1)
            return cls(2, dirs, wphi, "product")
        if n == 3:
            mu, wmu = roots_legendre(order)
            s = np.sqrt(1.0 - mu**2)
            dirs = np.stack(
                [
                    np.repeat(mu, nphi),
                    np.outer(s, np.cos(phi)).ravel(),
                    np.outer(s, np.sin(phi)).ravel(),
                ],
                axis=1,
            )
            return cls(3, dirs, np.outer(wmu, wphi).ravel(), "product")
        raise ValueError("general (non-axial) angular rules are limited to n <= 3")

    @property
    def size(self) -> int:
        return len(self.weights)


def _panel_edges(R: float, levels: int) -> np.ndarray:
    """Geometric edges 2^-k below 1, unit-width panels from 1 to R.

    Both band thresholds (1/4 and 1) are panel edges, so band integrals
    never split a panel.
    """
    if R > 1:
        inner = [2.0**-k for k in range(levels, -1, -1)]
        outer = np.linspace(1.0, R, int(math.ceil(R - 1.0)) + 1)[1:]
        return np.concatenate([[0.0], inner, outer])
    return np.concatenate([[0.0], [R * 2.0**-k for k in range(levels, -1, -1)]])


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Gauss-Legendre radial panels on ``[0, R]`` times an angular rule.

    Parameters
    ----------
    n : int
        Spatial dimension.
    R : float
        Truncation radius in frequency.
    levels : int
        Number of geometric refinement levels below ``|xi| = 1``.
    nodes_per_panel : int
        Gauss-Legendre nodes in each radial panel (at least 8).
    angular : AngularRule, optional
        Sphere rule; defaults to :meth:`AngularRule.radial`.
    """

    n: int
    R: float = 8.0
    levels: int = 30
    nodes_per_panel: int = 24
    angular: AngularRule | None = None
    edges: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("dimension must be a positive integer")
        if not self.R > 0:
            raise ValueError("truncation radius must be positive")
        if self.nodes_per_panel < MIN_NODES_PER_PANEL:
            raise ValueError(f"need at least {MIN_NODES_PER_PANEL} nodes per panel")
        if self.angular is None:
            object.__setattr__(self, "angular", AngularRule.radial(self.n))
        if self.angular.n != self.n:
            raise ValueError("angular rule dimension does not match the grid")
        object.__setattr__(self, "edges", _panel_edges(float(self.R), int(self.levels)))

    @property
    def panels(self):
        return list(zip(self.edges[:-1], self.edges[1:]))

    @cached_property
    def _radial_rule(self):
        x, w = roots_legendre(self.nodes_per_panel)
        lo, hi = self.edges[:-1, None], self.edges[1:, None]
        r = 0.5 * (hi - lo) * x[None, :] + 0.5 * (hi + lo)
        wr = 0.5 * (hi - lo) * w[None, :] * r ** (self.n - 1)
        return r.ravel(), wr.ravel()

    @property
    def radii(self) -> np.ndarray:
        return self._radial_rule[0]

    @property
    def radial_weights(self) -> np.ndarray:
        """Gauss weights times ``r^(n-1)``."""
        return self._radial_rule[1]

    @property
    def shape(self):
        return (self.radii.size, self.angular.size)

    @property
    def xi2(self) -> np.ndarray:
        """``|xi|^2`` per node, shape ``(n_r, 1)`` for broadcasting over directions."""
        return (self.radii**2)[:, None]

    @property
    def xi_norm(self) -> np.ndarray:
        return np.broadcast_to(self.radii[:, None], self.shape)

    @cached_property
    def nodes(self) -> np.ndarray:
        """Frequency vectors, shape ``(n_r, m, n)``."""
        return self.radii[:, None, None] * self.angular.directions[None, :, :]

    @cached_property
    def weights(self) -> np.ndarray:
        return np.outer(self.radial_weights, self.angular.weights)

    def panel_sums(self, integrand) -> np.ndarray:
        """Per-panel quadrature sums of ``integrand`` (shape :attr:`shape`).

        Reduction order is fixed: pairwise within each panel, then the panel
        totals are summed in order by the callers.
        """
        per_node = (np.asarray(integrand) * self.weights).sum(axis=1)
        return per_node.reshape(-1, self.nodes_per_panel).sum(axis=1)


@dataclass(frozen=True, eq=False)
class TensorGrid:
    """Uniform grid ``xi_j = -extent + j * spacing`` on each axis, ``n <= 3``."""

    n: int
    extent: float
    points: int

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ValueError("tensor grids support n in {1, 2, 3}")
        p = int(self.points)
        if p != self.points or p < 2 or p & (p - 1):
            raise ValueError(f"points per axis must be a power of two, got {self.points!r}")
        if not self.extent > 0:
            raise ValueError("extent must be positive")

    @property
    def spacing(self) -> float:
        return 2.0 * self.extent / self.points

    @property
    def axis(self) -> np.ndarray:
        return -self.extent + self.spacing * np.arange(self.points)

    @property
    def shape(self):
        return (self.points,) * self.n

    @cached_property
    def nodes(self) -> np.ndarray:
        mesh = np.meshgrid(*([self.axis] * self.n), indexing="ij")
        return np.stack(mesh, axis=-1)

    @property
    def xi2(self) -> np.ndarray:
        return np.sum(self.nodes**2, axis=-1)

    @property
    def xi_norm(self) -> np.ndarray:
        return np.sqrt(self.xi2)

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.n

    @property
    def physical_axis(self) -> np.ndarray:
        dx = np.pi / self.extent
        return dx * (np.arange(self.points) - self.points // 2)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Transform values sampled on a grid at time ``t``."""

    grid: RadialGrid | TensorGrid
    values: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != tuple(self.grid.shape):
            raise ValueError(f"values shape {values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("spectral field values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.grid.n


def _plancherel(n):
    return (2.0 * np.pi) ** (-n)


def radial_l2(field: SpectralField, return_tail: bool = False):
    """Physical-space L2 norm from a field on a :class:`RadialGrid`.

    Emits :class:`TruncationWarning` when the outermost panel holds more than
    1e-8 of the total.  With ``return_tail=True`` returns ``(norm, tail)``
    where ``tail`` is that last-panel share.
    """
    grid = field.grid
    if not isinstance(grid, RadialGrid):
        raise TypeError("radial_l2 needs a field on a RadialGrid")
    sums = grid.panel_sums(np.abs(field.values) ** 2)
    total = float(np.sum(sums))
    tail = float(sums[-1] / total) if total > 0 else 0.0
    if tail > TAIL_FRACTION_LIMIT:
        warnings.warn(
            f"last radial panel holds {tail:.2e} of the norm at R={grid.R}; truncation suspect",
            TruncationWarning,
            stacklevel=2,
        )
    norm = math.sqrt(_plancherel(grid.n) * total)
    return (norm, tail) if return_tail else norm


def tensor_l2(field: SpectralField) -> float:
    grid = field.grid
    if not isinstance(grid, TensorGrid):
        raise TypeError("tensor_l2 needs a field on a TensorGrid")
    total = float(np.sum(np.abs(field.values) ** 2)) * grid.cell_volume
    return math.sqrt(_plancherel(grid.n) * total)


def l2_norm(field: SpectralField) -> float:
    if isinstance(field.grid, RadialGrid):
        return radial_l2(field)
    return tensor_l2(field)


def band_l2_sq(field: SpectralField, band: Band) -> float:
    """``(2 pi)^-n`` times the integral of ``|f_hat|^2`` over one frequency band."""
    grid = field.grid
    sq = np.abs(field.values) ** 2
    if isinstance(grid, RadialGrid):
        if band is Band.HIGH and grid.R <= 1:
            raise ValueError("HIGH band needs a grid with R > 1")
        mask = band_mask(grid.xi_norm, band)
        sums = grid.panel_sums(np.where(mask, sq, 0.0))
        return _plancherel(grid.n) * float(np.sum(sums))
    if band is Band.HIGH and grid.extent <= 1:
        raise ValueError("HIGH band needs a grid with extent > 1")
    mask = band_mask(grid.xi_norm, band)
    return _plancherel(grid.n) * float(np.sum(np.where(mask, sq, 0.0))) * grid.cell_volume


def tensor_inverse_transform(field: SpectralField):
    """Approximate ``(2 pi)^-n int exp(i x.xi) f_hat(xi) dxi`` on the dual grid.

    Returns ``(x_axis, values)``; ``x_axis`` is shared by all axes and
    ``values`` has the grid shape.  Only for plots and spot checks; no norm
    in this package goes through physical space.
    """
    grid = field.grid
    if not isinstance(grid, TensorGrid):
        raise TypeError("tensor_inverse_transform needs a field on a TensorGrid")
    axes = tuple(range(grid.n))
    shifted = np.fft.ifftshift(field.values, axes=axes)
    out = np.fft.fftshift(np.fft.ifftn(shifted, axes=axes), axes=axes)
    scale = grid.points**grid.n * grid.cell_volume * _plancherel(grid.n)
    return grid.physical_axis, out * scale
