"""Verification suites: constants, identities, lemmas and theorems.

Each suite returns a list of :class:`Check` records.  A check passes when
``measured`` lies within ``tolerance`` of ``expected`` (``mode="abs"``) or
does not exceed ``expected + tolerance`` (``mode="max"``).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .analysis import (
    compute_M,
    decay_fit,
    gauss_l2_norm,
    high_decomposition,
    low_decomposition,
    maximize_L,
    modulus_identity_error,
)
from .data import AnalyticDatum, Term, TermKind
from .evolution import EvolutionProblem, band_residuals
from .experiment import ExperimentConfig, run
from .quadrature import RadialGrid, SpectralField, radial_l2
from .spectral import characteristic_roots, direct_propagators, dw_propagators, root_arrays

__all__ = ["Check", "SUITES", "run_suite", "format_check"]


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    expected: float
    tolerance: float
    passed: bool

    def as_dict(self):
        return {
            "name": self.name,
            "measured": self.measured,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _check(name, measured, expected, tolerance, mode="abs"):
    measured = float(measured)
    if mode == "abs":
        ok = abs(measured - expected) <= tolerance
    else:
        ok = measured <= expected + tolerance
    return Check(name, measured, float(expected), float(tolerance), bool(ok and math.isfinite(measured)))


def format_check(c: Check) -> str:
    flag = "PASS" if c.passed else "FAIL"
    return f"{flag}  {c.name}: measured={c.measured:.10g} expected={c.expected:.10g} tol={c.tolerance:.3g}"


def theta_star_oracle() -> float:
    """Root of ``tan(th/2) = th`` in ``(2, 3)`` by bracketing."""
    return brentq(lambda th: math.tan(th / 2) - th, 2.0, 3.0, xtol=1e-15)


# -- constants ---------------------------------------------------------------


def constants_suite(seed=0, scale=1.0):
    theta, L = maximize_L()
    theta_ref = theta_star_oracle()
    L_ref = (1 - math.cos(theta_ref)) / theta_ref
    th = np.linspace(1e-4, 100.0, 1_000_000)
    out = [
        _check("L = sup (1-cos th)/th", L, L_ref, 1e-10 * scale),
        _check("maximizer th*", theta, theta_ref, 1e-8 * scale),
        _check("M = sup |sin th|/th", compute_M(), 1.0, 0.0),
        _check("scan (1-cos th)/th - L", np.max((1 - np.cos(th)) / th) - L, 0.0, 1e-12 * scale, "max"),
        _check("scan |sin th|/th - M", np.max(np.abs(np.sin(th)) / th) - compute_M(), 0.0, 1e-12 * scale, "max"),
    ]
    for n in (1, 2, 3):
        grid = RadialGrid(n)
        worst = 0.0
        for t in (0.5, 1.0, 10.0):
            got = radial_l2(SpectralField(grid, np.exp(-t * grid.xi2) * np.ones(grid.shape)))
            worst = max(worst, abs(got / gauss_l2_norm(t, n) - 1))
        out.append(_check(f"Gauss kernel norm n={n} (rel err)", worst, 0.0, 1e-6 * scale, "max"))
    return out


# -- identities --------------------------------------------------------------


def _complex_normal(rng, size):
    return rng.normal(size=size) + 1j * rng.normal(size=size)


def ode_residual_ratios(seed=0, count=100, h=0.02):
    """Ratio of centred-difference ODE residuals at steps ``h`` and ``h/2``."""
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.1, 10.0, count)
    xi2 = rng.uniform(0.1, 3.0, count) ** 2
    u0, u1 = _complex_normal(rng, count), _complex_normal(rng, count)

    def residual(step):
        def u(s):
            m0, m1 = dw_propagators(s, xi2)
            return m0 * u0 + m1 * u1

        a, b, c = u(t - step), u(t), u(t + step)
        return np.abs((c - 2 * b + a) / step**2 + (c - a) / (2 * step) + xi2 * b)

    return residual(h) / residual(h / 2)


def identities_suite(seed=0, scale=1.0):
    rng = np.random.default_rng(seed)
    out = []

    xi2 = rng.uniform(0, 1e4, 10_000)
    s1, s2 = root_arrays(xi2)
    out.append(_check("Vieta sum", np.max(np.abs(s1 + s2 + 1)), 0.0, 1e-12 * scale, "max"))
    prod_err = np.abs(s1 * s2 - xi2) / np.maximum(xi2, 1e-300)
    out.append(_check("Vieta product (rel)", np.max(prod_err[xi2 > 0]), 0.0, 1e-12 * scale, "max"))

    worst = 0.0
    for _ in range(10_000):
        t = 10 ** rng.uniform(-3, 3)
        terms = low_decomposition(t, rng.uniform(0, 1 / 16), *_complex_normal(rng, 2))
        worst = max(worst, terms.identity_error())
    out.append(_check("low decomposition identity", worst, 0.0, 1e-12 * scale, "max"))

    worst = mod = 0.0
    for _ in range(10_000):
        t, x2 = rng.uniform(0, 20), rng.uniform(1, 25)
        terms = high_decomposition(t, x2, *_complex_normal(rng, 2))
        worst = max(worst, terms.identity_error())
        mod = max(mod, modulus_identity_error(t, x2))
    out.append(_check("high decomposition identity", worst, 0.0, 1e-12 * scale, "max"))
    out.append(_check("modulus identity |exp(-l^2 t)| exp(-t xi2) = exp(-t/2)", mod, 0.0, 1e-12 * scale, "max"))

    t = rng.uniform(0, 50, 20_000)
    xi2 = 10 ** rng.uniform(-6, 2, 20_000)
    keep = np.abs(1 - 4 * xi2) > 1e-3
    t, xi2 = t[keep], xi2[keep]
    m0, m1 = dw_propagators(t, xi2)
    d0, d1 = direct_propagators(t, xi2)
    rel = max(np.max(np.abs(m0 - d0) / np.abs(d0)), np.max(np.abs(m1 - d1) / np.maximum(np.abs(d1), 1e-300)))
    out.append(_check("unified vs two-root propagators (rel)", rel, 0.0, 1e-10 * scale, "max"))

    t = np.linspace(0, 50, 501)
    m0, m1 = dw_propagators(t, 0.25)
    e = np.exp(-t / 2)
    dbl = max(np.max(np.abs(m0 - e * (1 + t / 2)) / (e * (1 + t / 2))), np.max(np.abs(m1 - t * e)[1:] / (t * e)[1:]))
    out.append(_check("double-root closed forms (rel)", dbl, 0.0, 1e-13 * scale, "max"))

    ratios = ode_residual_ratios(seed)
    out.append(_check("ODE residual ratio min", ratios.min(), 4.0, 0.4 * scale))
    out.append(_check("ODE residual ratio max", ratios.max(), 4.0, 0.4 * scale))
    return out


# -- lemmas ------------------------------------------------------------------


def random_datum(rng, n=None):
    """One to three random Gaussian or dipole terms, ``n <= 3``.

    In ``n = 3`` all centres lie on one line through the origin (along a
    coordinate axis when dipoles are present), which keeps the physical
    quadrature two-dimensional.  ``n <= 2`` data are unrestricted.
    """
    n = int(rng.integers(1, 4)) if n is None else n
    axial = n == 3
    k = int(rng.integers(0, n))
    line = np.eye(n)[k] if rng.random() < 0.5 else _unit_vector(rng, n)
    dipoles_ok = not axial or abs(line[k]) == 1.0
    terms = []
    for _ in range(int(rng.integers(1, 4))):
        kind = TermKind.DIPOLE if dipoles_ok and rng.random() < 0.3 else TermKind.GAUSSIAN
        center = rng.uniform(-2, 2) * line if axial else rng.uniform(-2, 2, n)
        axis = k if axial else int(rng.integers(0, n))
        terms.append(Term(rng.uniform(-2, 2), center, rng.uniform(0.5, 2.0), kind, axis))
    return AnalyticDatum(n, terms)


def _unit_vector(rng, n):
    v = rng.normal(size=n)
    return v / np.linalg.norm(v)


def ab_bound_margins(seed=0, pairs=1000):
    """Worst ``|A| - L|xi| m1`` and ``|B| - M|xi| m1`` over random (datum, xi) pairs."""
    rng = np.random.default_rng(seed)
    L, M = maximize_L()[1], compute_M()
    worst_a = worst_b = -math.inf
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for _ in range(pairs):
            datum = random_datum(rng)
            xi = rng.normal(size=datum.n) * 10 ** rng.uniform(-2, 0.5)
            a, b = datum.ab(xi)
            m1 = datum.moments().abs_first_moment
            k = float(np.linalg.norm(xi))
            worst_a = max(worst_a, abs(a) - L * k * m1)
            worst_b = max(worst_b, abs(b) - M * k * m1)
    return worst_a, worst_b


def lemma_problem(n):
    u0 = AnalyticDatum.gaussian(n)
    u1 = AnalyticDatum.gaussian(n, 0.5, center=np.eye(n)[0])
    return EvolutionProblem.damped_wave(u0, u1)


def band_series(problem, times):
    return np.array([band_residuals(problem, t) for t in times])


def lemmas_suite(seed=0, scale=1.0):
    out = []
    worst_a, worst_b = ab_bound_margins(seed)
    out.append(_check("|A| - L|xi| int|x||f| (worst)", worst_a, 0.0, 1e-9 * scale, "max"))
    out.append(_check("|B| - M|xi| int|x||f| (worst)", worst_b, 0.0, 1e-9 * scale, "max"))

    rng = np.random.default_rng(seed)
    xi2 = rng.uniform(0, 1 / 16, 10_000)
    xi2 = xi2[xi2 > 0]
    s1, s2 = (r.real for r in root_arrays(xi2))
    out.append(_check("low band 0 < -s1 <= 2 xi2 (worst excess)", np.max(-s1 / (2 * xi2)) - 1, 0.0, 1e-15, "max"))
    out.append(_check("low band s1 < 0 (max s1)", np.max(s1), 0.0, 0.0, "max"))
    out.append(_check("low band s1 - s2 >= sqrt(3)/2 (worst shortfall)", math.sqrt(3) / 2 - np.min(s1 - s2), 0.0, 1e-15, "max"))
    pair = characteristic_roots(1.0)
    out.append(_check("|l_j| = |xi| at xi2 = 1", abs(pair.first), 1.0, 1e-15))
    out.append(_check("|l1 - l2| = sqrt(3) at xi2 = 1", abs(pair.first - pair.second), math.sqrt(3), 1e-15))

    t_low = np.logspace(2, 4, 49)
    t_hm = np.linspace(1, 50, 50)
    for n in (1, 2, 3):
        problem = lemma_problem(n)
        low = band_series(problem, t_low)[:, 0]
        slope = decay_fit(list(zip(t_low, low))).slope
        out.append(_check(f"low band slope n={n}", slope, -(n / 2 + 1), 0.1 * scale, "max"))
        bands = band_series(problem, t_hm)
        trend = np.polyfit(t_hm, np.log(bands[:, 2]) + t_hm, 1)[0]
        out.append(_check(f"high band: trend of log(high)+t n={n}", trend, 0.0, 0.05 * scale, "max"))
        tail = t_hm >= 25
        mid_rate = np.polyfit(t_hm[tail], np.log(bands[tail, 1]), 1)[0]
        out.append(_check(f"mid band: d log(mid)/dt n={n}", mid_rate, -0.1, 0.0, "max"))
    return out


# -- theorems ----------------------------------------------------------------


def _term(kind, amplitude, center, width=1.0, axis=0):
    return {"kind": kind, "amplitude": amplitude, "center": list(center), "width": width, "axis": axis}


def theorem_config(equation, n, t_min=100.0, t_max=1e4, zero_mass=False):
    e1 = [1.0] + [0.0] * (n - 1)
    origin = [0.0] * n
    if equation == "heat":
        data = {"v0": [_term("gaussian", 1.0, e1)]}
    elif zero_mass:
        data = {"u0": [_term("dipole", 1.0, origin)], "u1": [_term("dipole", 0.5, e1)]}
    else:
        data = {"u0": [_term("gaussian", 1.0, origin)], "u1": [_term("gaussian", 0.5, e1)]}
    return {
        "equation": equation,
        "n": n,
        "data": data,
        "time": {"t_min": t_min, "t_max": t_max, "per_decade": 24},
        "fit": {"t_min": t_min, "t_max": t_max},
    }


def ratio_growth(report):
    """``max ratio on [1e3, 1e4] / max ratio on [1e2, 1e3] - 1``."""
    early = max(r[5] for r in report.rows if 1e2 <= r[0] <= 1e3)
    late = max(r[5] for r in report.rows if 1e3 <= r[0] <= 1e4)
    return late / early - 1


def theorems_suite(seed=0, scale=1.0, workers=None):
    out = []
    for equation, tol in (("heat", 0.05), ("damped_wave", 0.10)):
        for n in (1, 2, 3):
            report = run(ExperimentConfig.from_dict(theorem_config(equation, n)), workers=workers)
            slope = report.fits["residual"]["slope"]
            out.append(_check(f"{equation} slope n={n}", slope, -(n / 4 + 0.5), tol * scale))
            out.append(_check(f"{equation} ratio plateau n={n}", ratio_growth(report), 0.0, 0.05 * scale, "max"))
    for n in (1, 2, 3):
        report = run(ExperimentConfig.from_dict(theorem_config("damped_wave", n, zero_mass=True)), workers=workers)
        slope = report.fits["residual"]["slope"]
        out.append(_check(f"zero-mass damped_wave slope n={n}", slope, -(n / 4 + 0.5), 0.1 * scale, "max"))
    return out


SUITES = {
    "constants": constants_suite,
    "identities": identities_suite,
    "lemmas": lemmas_suite,
    "theorems": theorems_suite,
}


def run_suite(name, seed=0, tolerance_scale=1.0, workers=None):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    if name == "theorems":
        return theorems_suite(seed, tolerance_scale, workers)
    return SUITES[name](seed, tolerance_scale)
