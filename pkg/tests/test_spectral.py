import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymprofile.spectral import (
    Band,
    RootKind,
    band_mask,
    band_of,
    characteristic_roots,
    direct_propagators,
    dw_propagators,
    heat_multiplier,
    root_arrays,
    shc,
)

times = st.floats(0, 50, allow_nan=False)
freqs2 = st.floats(0, 100, allow_nan=False)


# heat symbol


@pytest.mark.parametrize(
    "t, xi2, expected",
    [(0.0, 7.3, 1.0), (1.0, 1.0, math.exp(-1)), (2.0, 0.5, math.exp(-1))],
)
def test_heat_multiplier_examples(t, xi2, expected):
    assert heat_multiplier(t, xi2) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("t, xi2", [(-1.0, 1.0), (1.0, -0.1), (float("nan"), 1.0)])
def test_heat_multiplier_rejects_bad_input(t, xi2):
    with pytest.raises(ValueError):
        heat_multiplier(t, xi2)


@given(times, times, freqs2)
def test_heat_multiplier_monotone_in_t(t1, t2, xi2):
    lo, hi = sorted((t1, t2))
    assert heat_multiplier(hi, xi2) <= heat_multiplier(lo, xi2)


@given(times, freqs2, freqs2)
def test_heat_multiplier_monotone_in_xi2(t, a, b):
    lo, hi = sorted((a, b))
    assert heat_multiplier(t, hi) <= heat_multiplier(t, lo)
    assert 0 <= heat_multiplier(t, hi) <= 1


# characteristic roots


def test_roots_at_zero():
    pair = characteristic_roots(0.0)
    assert pair.kind is RootKind.REAL_DISTINCT
    assert (pair.first, pair.second) == (0, -1)


def test_roots_double():
    pair = characteristic_roots(0.25)
    assert pair.kind is RootKind.DOUBLE
    assert pair.first == pair.second == -0.5


def test_roots_complex():
    pair = characteristic_roots(1.0)
    assert pair.kind is RootKind.COMPLEX_CONJUGATE
    assert pair.first == pytest.approx(complex(-0.5, math.sqrt(3) / 2), abs=1e-15)
    assert pair.second == pytest.approx(complex(-0.5, -math.sqrt(3) / 2), abs=1e-15)
    assert pair.first * pair.second == pytest.approx(1.0, rel=1e-15)


def test_roots_reject_negative():
    with pytest.raises(ValueError):
        characteristic_roots(-1e-3)


def test_vieta_on_random_frequencies():
    rng = np.random.default_rng(1)
    xi2 = rng.uniform(0, 1e4, 10_000)
    s1, s2 = root_arrays(xi2)
    assert np.max(np.abs(s1 + s2 + 1)) <= 1e-12
    assert np.max(np.abs(s1 * s2 - xi2) / xi2) <= 1e-12


@given(st.floats(0, 1e4, allow_nan=False))
def test_root_ordering(xi2):
    pair = characteristic_roots(xi2)
    assert pair.first.real >= pair.second.real
    if pair.kind is RootKind.COMPLEX_CONJUGATE:
        assert pair.first.imag > 0


def test_small_root_has_no_cancellation():
    # first root ~ -xi2 - xi2^2 for tiny xi2
    xi2 = 1e-12
    assert characteristic_roots(xi2).first.real == pytest.approx(-xi2 - xi2**2, rel=1e-15)


# shc


def test_shc_examples():
    assert shc(0.0) == 1.0
    assert shc(1.0) == pytest.approx(1.1752011936438014, rel=1e-15)
    assert abs(shc(1j * math.pi)) < 1e-15


@given(st.floats(-3e-2, 3e-2, allow_nan=False))
def test_shc_continuous_across_series_switch(z):
    ref = 1 + z * z / 6 + z**4 / 120 + z**6 / 5040
    assert shc(z) == pytest.approx(ref, rel=1e-15)


# propagators


def test_propagators_at_t0():
    m0, m1 = dw_propagators(0.0, np.array([0.0, 0.1, 0.25, 1.0, 100.0]))
    assert np.all(m0 == 1.0) and np.all(m1 == 0.0)


@pytest.mark.parametrize("t", [0.5, 3.0, 40.0, 2000.0])
def test_propagators_zero_frequency(t):
    m0, m1 = dw_propagators(t, 0.0)
    assert m0 == pytest.approx(1.0, rel=1e-15)
    assert m1 == pytest.approx(-math.expm1(-t), rel=1e-13)


def test_propagators_double_root():
    t = np.linspace(0, 50, 201)
    m0, m1 = dw_propagators(t, 0.25)
    e = np.exp(-t / 2)
    np.testing.assert_allclose(m0, e * (1 + t / 2), rtol=1e-13)
    np.testing.assert_allclose(m1, t * e, rtol=1e-13)


def test_propagators_match_two_root_formula():
    rng = np.random.default_rng(2)
    t = rng.uniform(0, 50, 20_000)
    xi2 = 10 ** rng.uniform(-6, 2, 20_000)
    keep = np.abs(1 - 4 * xi2) > 1e-3
    m0, m1 = dw_propagators(t[keep], xi2[keep])
    d0, d1 = direct_propagators(t[keep], xi2[keep])
    assert np.max(np.abs(d0.imag) / np.abs(d0)) <= 1e-13
    np.testing.assert_allclose(m0, d0.real, rtol=1e-10)
    np.testing.assert_allclose(m1, d1.real, rtol=1e-10)


def test_propagators_finite_for_large_times():
    m0, m1 = dw_propagators(1e5, np.array([1e-8, 1e-3, 0.1, 0.3, 10.0]))
    assert np.all(np.isfinite(m0)) and np.all(np.isfinite(m1))


@settings(max_examples=200)
@given(times, st.floats(0.2, 0.3, allow_nan=False))
def test_propagators_continuous_through_double_root(t, xi2):
    a = np.array(dw_propagators(t, xi2))
    b = np.array(dw_propagators(t, xi2 + 1e-9))
    assert np.all(np.abs(a - b) <= 1e-7 * (1 + t * t))


def test_ode_residual_second_order():
    rng = np.random.default_rng(3)
    t = rng.uniform(0.1, 10, 100)
    xi2 = rng.uniform(0.1, 3, 100) ** 2

    def residual(h):
        out = []
        for m in (0, 1):
            a, b, c = (dw_propagators(t + s, xi2)[m] for s in (-h, 0, h))
            out.append(np.abs((c - 2 * b + a) / h**2 + (c - a) / (2 * h) + xi2 * b))
        return np.array(out)

    ratio = residual(0.02) / residual(0.01)
    assert np.all((3.6 <= ratio) & (ratio <= 4.4))


def test_propagators_reject_negative_time():
    with pytest.raises(ValueError):
        dw_propagators(-1.0, 0.5)


# bands


@pytest.mark.parametrize(
    "r, band", [(0.0, Band.LOW), (0.2, Band.LOW), (0.25, Band.LOW), (0.5, Band.MID), (1.0, Band.HIGH), (7.0, Band.HIGH)]
)
def test_band_of(r, band):
    assert band_of(r) is band


@given(st.lists(st.floats(0, 10, allow_nan=False), min_size=1, max_size=50))
def test_band_masks_partition(values):
    r = np.array(values)
    total = sum(band_mask(r, b).astype(int) for b in Band)
    assert np.all(total == 1)
    for x, lo, mid, hi in zip(r, band_mask(r, Band.LOW), band_mask(r, Band.MID), band_mask(r, Band.HIGH)):
        assert {Band.LOW: lo, Band.MID: mid, Band.HIGH: hi}[band_of(x)]
