"""Fourier symbols and characteristic roots for the heat and damped wave equations.

After a Fourier transform in space the heat equation becomes the scalar ODE
``v' = -|xi|^2 v`` and the damped wave equation becomes

    u'' + u' + |xi|^2 u = 0,

whose characteristic polynomial ``s^2 + s + |xi|^2`` has real roots for
``|xi| < 1/2``, a double root at ``|xi| = 1/2`` and complex conjugate roots
beyond.  Everything here is a pure function of ``(t, xi2)`` with
``xi2 = |xi|^2`` and broadcasts over numpy arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Band",
    "RootKind",
    "RootPair",
    "band_mask",
    "band_of",
    "characteristic_roots",
    "direct_propagators",
    "dw_propagators",
    "heat_multiplier",
    "root_arrays",
    "shc",
]

LOW_EDGE = 0.25
HIGH_EDGE = 1.0

# |z| below this switches shc to its power series; truncation error < 1e-28.
SHC_SERIES_RADIUS = 1e-2
# beyond this value of beta*t cosh/sinh are paired with exp(-t/2) analytically
_PAIRED_EXP_THRESHOLD = 30.0


class RootKind(enum.Enum):
    REAL_DISTINCT = "real_distinct"
    DOUBLE = "double"
    COMPLEX_CONJUGATE = "complex_conjugate"


@dataclass(frozen=True)
class RootPair:
    """Roots of ``s^2 + s + xi2``; ``first`` has the larger real part."""

    kind: RootKind
    first: complex
    second: complex


class Band(enum.Enum):
    LOW = "low"
    MID = "mid"
    HIGH = "high"


def _check_nonneg(name, value):
    if np.any(np.asarray(value) < 0):
        raise ValueError(f"{name} must be nonnegative")
    if np.any(np.isnan(value)):
        raise ValueError(f"{name} must not be NaN")


def heat_multiplier(t, xi2):
    """Heat symbol ``exp(-t * xi2)``."""
    t = np.asarray(t, dtype=float)
    xi2 = np.asarray(xi2, dtype=float)
    _check_nonneg("t", t)
    _check_nonneg("xi2", xi2)
    return np.exp(-t * xi2)


def characteristic_roots(xi2: float) -> RootPair:
    _check_nonneg("xi2", xi2)
    first, second = root_arrays(float(xi2))
    disc = 1.0 - 4.0 * float(xi2)
    if disc > 0:
        kind = RootKind.REAL_DISTINCT
    elif disc == 0:
        kind = RootKind.DOUBLE
    else:
        kind = RootKind.COMPLEX_CONJUGATE
    return RootPair(kind, complex(first), complex(second))


def root_arrays(xi2):
    """Vectorised roots ``(first, second)`` as complex arrays.

    In the real regime the larger root is formed as ``-2 xi2 / (1 + s)``,
    which avoids the cancellation in ``(-1 + s) / 2`` for small ``xi2``.
    """
    xi2 = np.asarray(xi2, dtype=float)
    disc = 1.0 - 4.0 * xi2
    real = disc >= 0
    s = np.sqrt(np.abs(disc))
    first_real = -2.0 * xi2 / (1.0 + s)
    second_real = -(1.0 + s) / 2.0
    first = np.where(real, first_real + 0j, -0.5 + 0.5j * s)
    second = np.where(real, second_real + 0j, -0.5 - 0.5j * s)
    return first, second


def shc(z):
    """Entire extension of ``sinh(z) / z`` with ``shc(0) = 1``."""
    z = np.asarray(z)
    small = np.abs(z) < SHC_SERIES_RADIUS
    safe = np.where(small, 1.0, z)
    ratio = np.sinh(safe) / safe
    z2 = z * z
    series = 1 + z2 / 6 * (1 + z2 / 20 * (1 + z2 / 42 * (1 + z2 / 72 * (1 + z2 / 110))))
    return np.where(small, series, ratio)


def dw_propagators(t, xi2):
    """Damped-wave multipliers ``(m0, m1)`` with ``u_hat = m0 u0_hat + m1 u1_hat``.

    Uses ``u_hat = exp(-t/2) w`` with ``w'' = beta^2 w``, ``beta^2 = 1/4 - xi2``:

        m1 = exp(-t/2) * t * shc(beta t)
        m0 = exp(-t/2) * (cosh(beta t) + (t/2) * shc(beta t))

    This single form is continuous through the double root ``xi2 = 1/4``
    and needs no case split between real and complex characteristic roots.

    Parameters
    ----------
    t : array_like
        Nonnegative times.
    xi2 : array_like
        Squared frequency moduli; broadcast against ``t``.

    Returns
    -------
    m0, m1 : ndarray
        Real multipliers of the initial displacement and velocity.
    """
    t, xi2 = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(xi2, dtype=float))
    _check_nonneg("t", t)
    _check_nonneg("xi2", xi2)
    shape = t.shape
    t, xi2 = t.ravel(), xi2.ravel()
    beta2 = 0.25 - xi2
    hyperbolic = beta2 >= 0
    b = np.sqrt(np.abs(beta2))
    z = b * t
    decay = np.exp(-0.5 * t)

    # hyperbolic, moderate argument
    hz = np.where(hyperbolic & (z <= _PAIRED_EXP_THRESHOLD), z, 0.0)
    sh = shc(hz)
    m0 = decay * (np.cosh(hz) + 0.5 * t * sh)
    m1 = decay * t * sh

    # hyperbolic, large argument: exp((+-b - 1/2) t), both exponents <= 0
    paired = hyperbolic & (z > _PAIRED_EXP_THRESHOLD)
    if np.any(paired):
        bp, tp = b[paired], t[paired]
        sigma1 = -xi2[paired] / (bp + 0.5)
        g_plus = np.exp(sigma1 * tp)
        g_minus = np.exp((-bp - 0.5) * tp)
        m0[paired] = 0.5 * (g_plus + g_minus) + (g_plus - g_minus) / (4.0 * bp)
        m1[paired] = (g_plus - g_minus) / (2.0 * bp)

    # oscillatory: cosh(i b t) = cos(b t), shc(i b t) = sin(b t) / (b t)
    osc = ~hyperbolic
    if np.any(osc):
        zo, to, do = z[osc], t[osc], decay[osc]
        sinc = shc(1j * zo).real
        m0[osc] = do * (np.cos(zo) + 0.5 * to * sinc)
        m1[osc] = do * to * sinc
    return m0.reshape(shape)[()], m1.reshape(shape)[()]


def direct_propagators(t, xi2):
    """Two-root formula for ``(m0, m1)``, complex valued.

    ``m0 = (s1 e^{s2 t} - s2 e^{s1 t}) / (s1 - s2)`` and
    ``m1 = (e^{s1 t} - e^{s2 t}) / (s1 - s2)``.  Undefined at the double
    root; kept as an independent reference for :func:`dw_propagators`.
    """
    t, xi2 = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(xi2, dtype=float))
    s1, s2 = root_arrays(xi2)
    e1, e2 = np.exp(s1 * t), np.exp(s2 * t)
    d = s1 - s2
    return (s1 * e2 - s2 * e1) / d, (e1 - e2) / d


def band_of(xi_norm: float) -> Band:
    _check_nonneg("xi_norm", xi_norm)
    if xi_norm <= LOW_EDGE:
        return Band.LOW
    if xi_norm >= HIGH_EDGE:
        return Band.HIGH
    return Band.MID


def band_mask(xi_norm, band: Band):
    """Boolean mask of the entries of ``xi_norm`` lying in ``band``."""
    r = np.asarray(xi_norm, dtype=float)
    if band is Band.LOW:
        return r <= LOW_EDGE
    if band is Band.HIGH:
        return r >= HIGH_EDGE
    return (r > LOW_EDGE) & (r < HIGH_EDGE)
