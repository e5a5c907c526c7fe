"""Gauss-profile oracles, decay fits and the low/high frequency decompositions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .evolution import Equation, EvolutionProblem, residual_norm
from .spectral import root_arrays

__all__ = [
    "DecayFit",
    "DecompositionTerms",
    "compute_L",
    "compute_M",
    "data_norm",
    "decay_fit",
    "fitted_constant",
    "gauss_l2_norm",
    "high_decomposition",
    "low_decomposition",
    "maximize_L",
    "modulus_identity_error",
    "theorem_ratio",
]

MIN_FIT_SAMPLES = 6


def gauss_l2_norm(t: float, n: int) -> float:
    """Exact ``||G(t, .)||_2 = (8 pi t)^(-n/4)`` for the heat kernel."""
    if not t > 0:
        raise ValueError("t must be positive")
    return (8.0 * math.pi * t) ** (-n / 4)


def _one_minus_cos_ratio(theta):
    return (1.0 - np.cos(theta)) / theta


def maximize_L(scan_points: int = 4096):
    """Maximiser and value of ``(1 - cos th) / th`` over ``th > 0``.

    Dense scan of ``(0, 2 pi]`` to bracket the peak, then golden-section
    refinement; two Newton steps on the stationarity condition
    ``th sin th = 1 - cos th`` (equivalently ``tan(th/2) = th``) then recover
    the digits golden section cannot resolve.  Returns ``(theta_star, L)``.
    """
    theta = np.linspace(2 * np.pi / scan_points, 2 * np.pi, scan_points)
    k = int(np.argmax(_one_minus_cos_ratio(theta)))
    bracket = (theta[max(k - 1, 0)], theta[k], theta[min(k + 1, scan_points - 1)])
    res = minimize_scalar(
        lambda th: -_one_minus_cos_ratio(th),
        bracket=bracket,
        method="golden",
        options={"xtol": 1e-14},
    )
    theta_star = float(res.x)
    for _ in range(2):
        step = (theta_star * math.sin(theta_star) - 1.0 + math.cos(theta_star)) / (
            theta_star * math.cos(theta_star)
        )
        theta_star -= step
    return theta_star, float(_one_minus_cos_ratio(theta_star))


def compute_L() -> float:
    """``sup |1 - cos th| / |th|`` (about 0.7246)."""
    return maximize_L()[1]


def compute_M() -> float:
    """``sup |sin th| / |th|``, attained only in the limit ``th -> 0``."""
    return 1.0


@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    r_squared: float
    window: tuple
    samples: int

    def as_dict(self):
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "window": list(self.window),
            "samples": self.samples,
        }


def decay_fit(samples) -> DecayFit:
    """Least-squares line through ``(log t, log value)``.

    Raises ``ValueError`` for nonpositive values: that usually means the
    residual reached the floating-point floor.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("samples must be (t, value) pairs")
    if len(arr) < MIN_FIT_SAMPLES:
        raise ValueError(f"need at least {MIN_FIT_SAMPLES} samples, got {len(arr)}")
    t, v = arr[:, 0], arr[:, 1]
    if np.any(t <= 0):
        raise ValueError("times must be positive")
    if np.any(v <= 0):
        raise ValueError("values must be positive to take logarithms")
    x, y = np.log(t), np.log(v)
    if np.ptp(x) == 0:
        raise ValueError("times must not all coincide")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - float(np.sum(resid**2)) / ss_tot)
    return DecayFit(float(slope), float(intercept), r2, (float(t.min()), float(t.max())), len(arr))


@dataclass(frozen=True)
class DecompositionTerms:
    """Split of the damped-wave transform into the profile part and corrections.

    ``main`` is ``(u0_hat + u1_hat) exp(-t xi2)``; ``t1``, ``t2``, ``t3`` are the
    three root-bracket corrections and ``k2`` the fast-root part.  Their sum
    equals ``direct``, the two-root solution formula.
    """

    main: complex
    t1: complex
    t2: complex
    t3: complex
    k2: complex
    direct: complex
    kind: str = "low"

    @property
    def total(self):
        return self.main + self.t1 + self.t2 + self.t3 + self.k2

    def identity_error(self) -> float:
        """``|total - direct| / |direct|`` (absolute when ``direct`` vanishes)."""
        err = abs(self.total - self.direct)
        return err / abs(self.direct) if self.direct != 0 else err

    def residual(self, mass: float, t: float, xi2: float) -> complex:
        """``direct - mass * exp(-t xi2)``."""
        return self.direct - mass * math.exp(-t * xi2)


def _decompose(t, xi2, u0hat, u1hat, first, second, kind):
    decay = math.exp(-t * xi2)
    diff = first - second
    # exp(-r^2 t) evaluated through r^2 = -r - xi2
    g1 = np.exp((first + xi2) * t)
    g2 = np.exp((second + xi2) * t)
    main = (u0hat + u1hat) * decay
    t1 = decay * first * u0hat / (second - first)
    t2 = decay * second * u0hat * (1.0 - g1) / diff
    t3 = decay * u1hat * (g1 - diff) / diff
    k = decay * (u0hat * first - u1hat) / diff * g2
    direct = (u1hat - second * u0hat) / diff * np.exp(first * t) + (u0hat * first - u1hat) / diff * np.exp(
        second * t
    )
    return DecompositionTerms(complex(main), complex(t1), complex(t2), complex(t3), complex(k), complex(direct), kind)


def low_decomposition(t: float, xi2: float, u0hat: complex, u1hat: complex) -> DecompositionTerms:
    """Terms of the real-root split, valid for ``|xi| <= 1/4``."""
    if xi2 > 1.0 / 16.0 or xi2 < 0:
        raise ValueError("low decomposition needs 0 <= xi2 <= 1/16")
    if t < 0:
        raise ValueError("t must be nonnegative")
    s1, s2 = (complex(r) for r in root_arrays(xi2))
    return _decompose(t, xi2, u0hat, u1hat, s1.real, s2.real, "low")


def high_decomposition(t: float, xi2: float, u0hat: complex, u1hat: complex) -> DecompositionTerms:
    """Terms of the complex-root split, valid for ``|xi| >= 1``.

    The factored form multiplies ``exp(-t xi2)`` by ``exp((xi2 - 1/2) t)``,
    so ``t * xi2`` must stay below the overflow threshold (700).
    """
    if xi2 < 1.0:
        raise ValueError("high decomposition needs xi2 >= 1")
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t * xi2 > 700.0:
        raise ValueError("t * xi2 > 700 overflows the factored form")
    l1, l2 = (complex(r) for r in root_arrays(xi2))
    return _decompose(t, xi2, u0hat, u1hat, l1, l2, "high")


def modulus_identity_error(t: float, xi2: float) -> float:
    """Relative error of ``|exp(-l^2 t)| exp(-t xi2) = exp(-t/2)`` for both complex roots."""
    errs = []
    target = math.exp(-0.5 * t)
    for lam in root_arrays(xi2):
        lam = complex(lam)
        value = abs(np.exp((lam + xi2) * t)) * math.exp(-t * xi2)
        errs.append(abs(value - target) / target)
    return max(errs)


def data_norm(problem: EvolutionProblem) -> float:
    """Data combination on the right-hand side of the decay estimate.

    Heat: ``int |x| |v0| dx``.  Damped wave:
    ``||u0||_{1,1} + ||u1||_{1,1} + ||u0|| + ||grad u0|| + ||u1||``.
    """
    if problem.equation is Equation.HEAT:
        return problem.data[0].moments().abs_first_moment
    m0, m1 = (d.moments() for d in problem.data)
    return m0.weighted_11 + m1.weighted_11 + m0.l2 + m0.grad_l2 + m1.l2


def theorem_ratio(problem: EvolutionProblem, times, norm: float | None = None):
    """``(t, ||u(t) - P G(t)|| t^(n/4 + 1/2) / data_norm)`` for each time.

    A zero residual gives ratio 0; a nonzero residual over a zero data norm
    gives NaN.
    """
    denom = data_norm(problem) if norm is None else norm
    rate = problem.n / 4 + 0.5
    out = []
    for t in times:
        r = residual_norm(problem, t)
        if r == 0:
            ratio = 0.0
        elif denom == 0:
            ratio = math.nan
        else:
            ratio = r * t**rate / denom
        out.append((float(t), ratio))
    return out


def fitted_constant(ratios) -> float:
    """Empirical constant: the supremum of the finite ratios."""
    vals = [r for _, r in ratios if math.isfinite(r)]
    return max(vals) if vals else math.nan
