"""Initial data with closed-form Fourier transforms.

An :class:`AnalyticDatum` is a finite sum of Gaussians

    g(x) = a * exp(-|x - c|^2 / (2 w^2)),   g_hat(xi) = a (sqrt(2 pi) w)^n exp(-w^2 |xi|^2 / 2) exp(-i c.xi)

and dipoles ``d/dx_k g`` (zero mass, transform ``i xi_k g_hat``).  Every
member lies in ``L^2 cap L^{1,1}``.  A :class:`GridDatum` wraps sampled data
on a uniform grid and uses discrete sums for the same quantities.

Physical-space integrals that have no closed form (``int |x| |f|``, the
``A``/``B`` split) use Gauss-Legendre panels.  When the datum is radial or
axially symmetric the integral is reduced to the ``(s, rho)`` half plane
``x = s d + y`` with ``rho = |y|``; the transverse sphere integral of
``exp(-i y.xi)`` becomes a Bessel function.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma, jv, roots_legendre

from .quadrature import AngularRule, RadialGrid, sphere_area

__all__ = [
    "AnalyticDatum",
    "GridDatum",
    "MomentReport",
    "QuadratureWarning",
    "Term",
    "TermKind",
    "ab_at",
    "angular_rule_for",
    "default_grid",
    "ft_at",
    "grid_datum_from_samples",
    "moments",
    "symmetry_of",
]

# quadrature half-width in units of the widest Gaussian: exp(-50) tail
_TAIL_WIDTHS = 10.0
_GL_ORDER = 16
_GL_CHECK_ORDER = 24
_ORIGIN_LEVELS = 10
MOMENT_RTOL = 1e-8


class QuadratureWarning(UserWarning):
    """Two quadrature resolutions disagree beyond the requested tolerance."""


class TermKind(enum.Enum):
    GAUSSIAN = "gaussian"
    DIPOLE = "dipole"


@dataclass(frozen=True)
class Term:
    amplitude: float
    center: tuple
    width: float
    kind: TermKind = TermKind.GAUSSIAN
    axis: int = 0

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "amplitude", float(self.amplitude))
        object.__setattr__(self, "width", float(self.width))
        if not self.width > 0:
            raise ValueError(f"width must be positive, got {self.width}")
        if not 0 <= self.axis < len(self.center):
            raise ValueError(f"dipole axis {self.axis} out of range")

    @property
    def gaussian_mass(self) -> float:
        """Mass of the underlying Gaussian, ``a (sqrt(2 pi) w)^n``."""
        return self.amplitude * (math.sqrt(2.0 * math.pi) * self.width) ** len(self.center)


@dataclass(frozen=True)
class MomentReport:
    mass: float
    abs_first_moment: float
    weighted_11: float
    l1: float
    l2: float
    grad_l2: float
    converged: bool = True


@dataclass(frozen=True)
class AnalyticDatum:
    """Finite sum of Gaussian and dipole terms in ``R^n``."""

    n: int
    terms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("dimension must be a positive integer")
        for term in self.terms:
            if len(term.center) != self.n:
                raise ValueError(f"term center {term.center} does not have length {self.n}")

    @classmethod
    def gaussian(cls, n, amplitude=1.0, center=None, width=1.0):
        center = (0.0,) * n if center is None else center
        return cls(n, (Term(amplitude, center, width),))

    @classmethod
    def dipole(cls, n, axis=0, amplitude=1.0, center=None, width=1.0):
        center = (0.0,) * n if center is None else center
        return cls(n, (Term(amplitude, center, width, TermKind.DIPOLE, axis),))

    @classmethod
    def zero(cls, n):
        return cls(n, ())

    @classmethod
    def gauss_kernel(cls, n, t=1.0, mass=1.0):
        """``mass * G(t, .)`` with ``G`` the heat kernel; transform ``mass * exp(-t |xi|^2)``."""
        w = math.sqrt(2.0 * t)
        return cls.gaussian(n, mass * (4.0 * math.pi * t) ** (-n / 2), width=w)

    def __add__(self, other):
        if not isinstance(other, AnalyticDatum):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("cannot add data of different dimensions")
        return AnalyticDatum(self.n, self.terms + other.terms)

    def __mul__(self, scale):
        scale = float(scale)
        terms = tuple(
            Term(scale * t.amplitude, t.center, t.width, t.kind, t.axis) for t in self.terms
        )
        return AnalyticDatum(self.n, terms)

    __rmul__ = __mul__

    @property
    def mass(self) -> float:
        return float(sum(t.gaussian_mass for t in self.terms if t.kind is TermKind.GAUSSIAN))

    @property
    def min_width(self) -> float:
        return min((t.width for t in self.terms), default=1.0)

    @property
    def max_width(self) -> float:
        return max((t.width for t in self.terms), default=1.0)

    def ft(self, xi):
        """Closed-form transform at frequencies ``xi`` of shape ``(..., n)``.

        At ``xi = 0`` this returns exactly :attr:`mass` (same expression,
        same summation order).
        """
        xi = np.asarray(xi, dtype=float)
        if xi.shape[-1] != self.n:
            raise ValueError(f"frequency vectors must have length {self.n}")
        xi2 = np.sum(xi * xi, axis=-1)
        out = np.zeros(xi.shape[:-1], dtype=complex)
        for term in self.terms:
            c = np.asarray(term.center)
            phase = np.exp(-1j * (xi @ c)) if np.any(c) else 1.0
            g = term.gaussian_mass * np.exp(-0.5 * term.width**2 * xi2) * phase
            if term.kind is TermKind.DIPOLE:
                g = 1j * xi[..., term.axis] * g
            out = out + g
        return out

    def __call__(self, x):
        """Physical-space values at points ``x`` of shape ``(..., n)``."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1])
        for term in self.terms:
            dx = x - np.asarray(term.center)
            g = term.amplitude * np.exp(-np.sum(dx * dx, axis=-1) / (2.0 * term.width**2))
            if term.kind is TermKind.DIPOLE:
                g = -dx[..., term.axis] / term.width**2 * g
            out = out + g
        return out

    def _breakpoints(self, d):
        """Kinks of ``|x| |f|`` along ``d``: the origin and dipole centres."""
        return [0.0] + [
            float(np.asarray(t.center) @ d) for t in self.terms if t.kind is TermKind.DIPOLE
        ]

    def moments(self) -> MomentReport:
        kind, axis = symmetry_of(self)
        if not self.terms:
            return MomentReport(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

        def absolute_integrals(order):
            l1 = first = 0.0
            for pts, wts in _physical_slabs(self, kind, axis, order):
                fabs = np.abs(self(pts)) * wts
                l1 += float(np.sum(fabs))
                first += float(np.sum(np.linalg.norm(pts, axis=-1) * fabs))
            return l1, first

        l1, first = absolute_integrals(_GL_ORDER)
        l1_check, first_check = absolute_integrals(_GL_CHECK_ORDER)
        scale = max(l1 + first, 1e-300)
        converged = abs(l1 - l1_check) + abs(first - first_check) <= MOMENT_RTOL * scale
        if not converged:
            warnings.warn("weighted-norm quadrature did not converge to 1e-8", QuadratureWarning, stacklevel=2)

        l2, grad = _plancherel_norms(self, default_grid(self))
        return MomentReport(self.mass, first, l1 + first, l1, l2, grad, converged)

    def ab(self, xi, check: bool = False):
        """``A = int (cos(x.xi) - 1) f dx`` and ``B = int sin(x.xi) f dx`` by quadrature."""
        xi = np.asarray(xi, dtype=float).reshape(self.n)
        if not self.terms or not np.any(xi):
            return 0.0, 0.0
        kind, axis = symmetry_of(self)
        a, b = _ab_quadrature(self, kind, axis, xi, _GL_ORDER)
        if check:
            a2, b2 = _ab_quadrature(self, kind, axis, xi, _GL_CHECK_ORDER)
            if abs(a - a2) + abs(b - b2) > MOMENT_RTOL * max(1.0, abs(a) + abs(b)):
                warnings.warn("A/B quadrature did not converge", QuadratureWarning, stacklevel=2)
        return a, b


def _plancherel_norms(datum, grid, rows=64):
    """``(||f||, ||grad f||)`` on a radial grid, evaluated a few radii at a time."""
    r, dirs = grid.radii, grid.angular.directions
    shell = np.empty(r.size)
    for k in range(0, r.size, rows):
        fhat = datum.ft(r[k : k + rows, None, None] * dirs[None, :, :])
        shell[k : k + rows] = (np.abs(fhat) ** 2) @ grid.angular.weights
    per_panel = (shell * grid.radial_weights).reshape(-1, grid.nodes_per_panel)
    grad_panel = (shell * r**2 * grid.radial_weights).reshape(-1, grid.nodes_per_panel)
    scale = (2.0 * math.pi) ** (-datum.n)
    return math.sqrt(scale * per_panel.sum()), math.sqrt(scale * grad_panel.sum())


def _gl_nodes(lo, hi, h, breaks, order):
    """Gauss-Legendre nodes on ``[lo, hi]``, panels no wider than ``h``, split at ``breaks``."""
    edges = sorted({lo, hi, *[b for b in breaks if lo < b < hi]})
    x, w = roots_legendre(order)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        k = max(1, int(math.ceil((b - a) / h)))
        sub = np.linspace(a, b, k + 1)
        for p, q in zip(sub[:-1], sub[1:]):
            nodes.append(0.5 * (q - p) * x + 0.5 * (q + p))
            weights.append(0.5 * (q - p) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _panel_width(datum, xi_norm):
    h = datum.min_width
    if xi_norm > 0:
        h = min(h, 2.0 / xi_norm)
    return h


def _axial_frame(datum, kind, axis, xi):
    n = datum.n
    if kind == "axial":
        return np.asarray(axis, dtype=float)
    # radial: align the frame with xi so the transverse phase vanishes
    if xi is not None and np.any(xi):
        return xi / np.linalg.norm(xi)
    d = np.zeros(n)
    d[0] = 1.0
    return d


def _perp(d):
    k = int(np.argmin(np.abs(d)))
    e = np.zeros_like(d)
    e[k] = 1.0
    p = e - (e @ d) * d
    return p / np.linalg.norm(p)


def _half_plane_rule(datum, d, xi_norm, order):
    """Nodes ``(s, rho)`` and weights for ``x = s d + rho p``, including ``omega rho^(n-2)``."""
    proj = [float(np.asarray(t.center) @ d) for t in datum.terms]
    span = _TAIL_WIDTHS * datum.max_width
    h = _panel_width(datum, xi_norm)
    # |x| has a conical point at the origin: grade panels geometrically towards it
    graded = [datum.min_width * 2.0**-k for k in range(1, _ORIGIN_LEVELS + 1)]
    breaks = datum._breakpoints(d) + graded + [-g for g in graded]
    s, ws = _gl_nodes(min(proj) - span, max(proj) + span, h, breaks, order)
    if datum.n == 1:
        return s, ws, None, None
    rho, wr = _gl_nodes(0.0, span, h, graded, order)
    wr = wr * sphere_area(datum.n - 1) * rho ** (datum.n - 2)
    return s, ws, rho, wr


def _cartesian_rule(datum, xi_norm, order):
    if datum.n > 3:
        raise ValueError("non-axial data are supported only for n <= 3")
    span = _TAIL_WIDTHS * datum.max_width
    h = _panel_width(datum, xi_norm)
    axes = []
    for k in range(datum.n):
        cs = [t.center[k] for t in datum.terms]
        breaks = [0.0] + [
            t.center[k] for t in datum.terms if t.kind is TermKind.DIPOLE and t.axis == k
        ]
        if datum.n == 2:
            # in 3-D the volume element already tames the cone of |x| at the origin
            graded = [datum.min_width * 2.0**-j for j in range(1, _ORIGIN_LEVELS + 1)]
            breaks += graded + [-g for g in graded]
        axes.append(_gl_nodes(min(cs) - span, max(cs) + span, h, breaks, order))
    return axes


def _cartesian_slabs(axes):
    """Yield ``(points, weights)`` one first-axis node at a time to bound memory."""
    rest = np.meshgrid(*[ax[0] for ax in axes[1:]], indexing="ij")
    rest_w = np.meshgrid(*[ax[1] for ax in axes[1:]], indexing="ij")
    rest_pts = np.stack([r.ravel() for r in rest], axis=-1) if rest else np.zeros((1, 0))
    rest_wts = np.prod([w.ravel() for w in rest_w], axis=0) if rest_w else np.ones(1)
    for x0, w0 in zip(*axes[0]):
        pts = np.concatenate([np.full((len(rest_pts), 1), x0), rest_pts], axis=1)
        yield pts, rest_wts * w0


def _physical_slabs(datum, kind, axis, order):
    """Physical nodes ``(N, n)`` and weights for integrals over R^n, in chunks."""
    if kind == "general":
        yield from _cartesian_slabs(_cartesian_rule(datum, 0.0, order))
        return
    d = _axial_frame(datum, kind, axis, None)
    s, ws, rho, wr = _half_plane_rule(datum, d, 0.0, order)
    if rho is None:
        yield s[:, None] * d[None, :], ws
        return
    p = _perp(d)
    pts = s[:, None, None] * d + rho[None, :, None] * p
    yield pts.reshape(-1, datum.n), np.outer(ws, wr).ravel()


def _transverse_mean(k, m):
    """Sphere average over ``S^(m-1)`` of ``cos(k y_1)``: ``Gamma(m/2) (2/k)^(m/2-1) J_(m/2-1)(k)``."""
    k = np.asarray(k, dtype=float)
    nu = m / 2 - 1
    safe = np.where(k == 0, 1.0, k)
    val = gamma(m / 2) * (2.0 / safe) ** nu * jv(nu, safe)
    return np.where(k == 0, 1.0, val)


def _ab_quadrature(datum, kind, axis, xi, order):
    xi_norm = float(np.linalg.norm(xi))
    if kind == "general":
        a_sum = b_sum = 0.0
        for pts, wts in _cartesian_slabs(_cartesian_rule(datum, xi_norm, order)):
            f = datum(pts) * wts
            ph = pts @ xi
            a_sum += float(np.sum(f * (np.cos(ph) - 1.0)))
            b_sum += float(np.sum(f * np.sin(ph)))
        return a_sum, b_sum

    d = _axial_frame(datum, kind, axis, xi)
    s, ws, rho, wr = _half_plane_rule(datum, d, xi_norm, order)
    xi_par = float(xi @ d)
    if rho is None:
        f = datum(s[:, None] * d[None, :]) * ws
        return float(np.sum(f * (np.cos(s * xi_par) - 1.0))), float(np.sum(f * np.sin(s * xi_par)))
    p = _perp(d)
    xi_perp = float(np.linalg.norm(xi - xi_par * d))
    pts = s[:, None, None] * d + rho[None, :, None] * p
    f = datum(pts) * np.outer(ws, wr)
    lam = _transverse_mean(rho * xi_perp, datum.n - 1)
    c, sn = np.cos(s * xi_par), np.sin(s * xi_par)
    a = float(np.sum(f * (c[:, None] * lam[None, :] - 1.0)))
    b = float(np.sum(f * (sn[:, None] * lam[None, :])))
    return a, b


@dataclass(frozen=True, eq=False)
class GridDatum:
    """Samples on a uniform tensor grid, ``n <= 3``; transforms by discrete sums."""

    samples: np.ndarray
    spacing: tuple
    origin: tuple
    _axes: tuple = field(init=False, repr=False)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim not in (1, 2, 3):
            raise ValueError("grid data support n <= 3")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "samples", samples)
        axes = tuple(
            o + h * np.arange(m) if o is not None else h * (np.arange(m) - (m - 1) / 2)
            for o, h, m in zip(self.origin, self.spacing, samples.shape)
        )
        object.__setattr__(self, "_axes", axes)

    @property
    def n(self) -> int:
        return self.samples.ndim

    @property
    def axes(self):
        return self._axes

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def mass(self) -> float:
        return float(np.sum(self.samples)) * self.cell_volume

    @property
    def points(self):
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    def ft(self, xi, chunk: int = 2048):
        xi = np.asarray(xi, dtype=float)
        if xi.shape[-1] != self.n:
            raise ValueError(f"frequency vectors must have length {self.n}")
        flat = xi.reshape(-1, self.n)
        out = np.empty(len(flat), dtype=complex)
        letters = "ijk"[: self.n]
        spec = ",".join(f"m{c}" for c in letters) + f",{letters}->m"
        for lo in range(0, len(flat), chunk):
            block = flat[lo : lo + chunk]
            phases = [np.exp(-1j * np.outer(block[:, k], ax)) for k, ax in enumerate(self.axes)]
            out[lo : lo + chunk] = np.einsum(spec, *phases, self.samples, optimize=True)
        return (out * self.cell_volume).reshape(xi.shape[:-1])

    def __call__(self, x):
        raise TypeError("grid data are only defined at their sample points")

    def moments(self) -> MomentReport:
        v = self.cell_volume
        r = np.linalg.norm(self.points, axis=-1)
        fabs = np.abs(self.samples)
        l1 = float(np.sum(fabs)) * v
        first = float(np.sum(r * fabs)) * v
        l2 = math.sqrt(float(np.sum(self.samples**2)) * v)
        grads = np.gradient(self.samples, *self.spacing)
        grads = grads if isinstance(grads, list) else [grads]
        grad = math.sqrt(float(sum(np.sum(g**2) for g in grads)) * v)
        return MomentReport(self.mass, first, l1 + first, l1, l2, grad)

    def ab(self, xi, check: bool = False):
        xi = np.asarray(xi, dtype=float).reshape(self.n)
        ph = self.points @ xi
        v = self.cell_volume
        a = float(np.sum(self.samples * (np.cos(ph) - 1.0))) * v
        b = float(np.sum(self.samples * np.sin(ph))) * v
        return a, b


def grid_datum_from_samples(samples, spacing, origin=None) -> GridDatum:
    """Wrap uniformly sampled data.

    ``spacing`` is a scalar, one step per axis, or one coordinate array per
    axis (which must be uniform).  Without ``origin`` the grid is centred on
    ``x = 0``.
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.ndim
    if n not in (1, 2, 3):
        raise ValueError("grid data support n <= 3")
    if n == 1 and np.ndim(spacing) == 1 and np.size(spacing) == samples.size > 1:
        spacing = [spacing]  # a single coordinate array
    if np.ndim(spacing) == 0:
        steps = (float(spacing),) * n
    elif all(np.ndim(s) == 0 for s in spacing):
        steps = tuple(float(s) for s in spacing)
    else:
        coords = [np.asarray(c, dtype=float) for c in spacing]
        steps, origins = [], []
        for c, m in zip(coords, samples.shape):
            if c.size != m:
                raise ValueError("coordinate array length does not match samples")
            dc = np.diff(c)
            if not np.allclose(dc, dc[0], rtol=1e-9, atol=0):
                raise ValueError("non-uniform spacing is not supported")
            steps.append(float(dc[0]))
            origins.append(float(c[0]))
        steps = tuple(steps)
        origin = tuple(origins) if origin is None else origin
    if len(steps) != n or any(not h > 0 for h in steps):
        raise ValueError("spacing must be positive, one per axis")
    origin = (None,) * n if origin is None else tuple(float(o) for o in origin)
    return GridDatum(samples, steps, origin)


def symmetry_of(*data):
    """Classify the joint symmetry of some data: ``("radial" | "axial" | "general", axis)``.

    Axial means every nonzero centre and every dipole axis is parallel to a
    common unit vector, which is returned.
    """
    vectors = []
    for datum in data:
        if isinstance(datum, GridDatum):
            return "general", None
        for term in datum.terms:
            c = np.asarray(term.center)
            if np.any(c):
                vectors.append(c)
            if term.kind is TermKind.DIPOLE:
                e = np.zeros(len(c))
                e[term.axis] = 1.0
                vectors.append(e)
    if not vectors:
        return "radial", None
    d = vectors[0] / np.linalg.norm(vectors[0])
    for v in vectors[1:]:
        if np.linalg.norm(v - (v @ d) * d) > 1e-12 * np.linalg.norm(v):
            return "general", None
    return "axial", d


def angular_rule_for(*data, order=None) -> AngularRule:
    n = data[0].n
    kind, axis = symmetry_of(*data)
    if kind == "radial":
        return AngularRule.radial(n)
    if order is None:
        reach = max(
            (np.linalg.norm(t.center) for d in data if isinstance(d, AnalyticDatum) for t in d.terms),
            default=0.0,
        )
        R = _default_radius(*data)
        order = max(32, int(math.ceil(R * reach)) + 16)
    if kind == "axial":
        return AngularRule.axial(n, axis, order)
    return AngularRule.product(n, order)


def _default_radius(*data):
    widths = [d.min_width for d in data if isinstance(d, AnalyticDatum) and d.terms]
    if not widths:
        return 8.0
    return max(8.0, 10.0 / min(widths))


def default_grid(*data, levels=30, nodes_per_panel=24, angular_order=None, R=None) -> RadialGrid:
    """Radial grid suited to the given data: ``R = max(8, 10 / w_min)`` and a
    matching angular rule."""
    n = data[0].n
    if any(d.n != n for d in data):
        raise ValueError("data dimensions differ")
    R = _default_radius(*data) if R is None else R
    return RadialGrid(n, R, levels, nodes_per_panel, angular_rule_for(*data, order=angular_order))


def ft_at(datum, xi):
    """Transform of ``datum`` at ``xi``; scalar for a single vector."""
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 0:
        xi = xi.reshape(1)
    out = datum.ft(xi)
    return complex(out) if np.ndim(out) == 0 else out


def moments(datum) -> MomentReport:
    return datum.moments()


def ab_at(datum, xi, check: bool = False):
    return datum.ab(xi, check=check)
