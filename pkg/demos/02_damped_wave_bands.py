"""Damped waves behave like heat flow for large times.

The residual u(t) - (P00 + P01) G(t) is split over three frequency bands:
|xi| <= 1/4 (real characteristic roots), 1/4 < |xi| < 1, and |xi| >= 1
(complex roots).  The low band carries the algebraic decay; the other two
die out exponentially.

Run:  python demos/02_damped_wave_bands.py
"""

import numpy as np

from asymprofile import AnalyticDatum, EvolutionProblem, band_residuals, decay_fit, residual_norm

n = 3
u0 = AnalyticDatum.gaussian(n, 1.0)
u1 = AnalyticDatum.gaussian(n, 0.5, center=(1.0, 0.0, 0.0))
problem = EvolutionProblem.damped_wave(u0, u1)
print(f"P00 + P01 = {problem.profile_mass:.6f}")

print("\n    t        low          mid          high   (squared norms)")
for t in (1.0, 5.0, 20.0, 50.0, 200.0):
    low, mid, high = band_residuals(problem, t)
    print(f"{t:6.1f}  {low:.4e}  {mid:.4e}  {high:.4e}")

times = np.logspace(2, 4, 49)
fit = decay_fit([(t, residual_norm(problem, t)) for t in times])
low_fit = decay_fit([(t, band_residuals(problem, t)[0]) for t in times])
print(f"\nresidual slope {fit.slope:.4f} (rate {-(n / 4 + 0.5)})")
print(f"low band slope {low_fit.slope:.4f} (squared, rate {-(n / 2 + 1)})")

# zero total mass: the profile vanishes and u itself decays at the faster rate
d0 = AnalyticDatum.dipole(n, axis=0)
d1 = AnalyticDatum.dipole(n, axis=0, amplitude=0.5, center=(1.0, 0.0, 0.0))
dipoles = EvolutionProblem.damped_wave(d0, d1)
fit = decay_fit([(t, residual_norm(dipoles, t)) for t in times])
print(f"dipole data: ||u|| slope {fit.slope:.4f}")
