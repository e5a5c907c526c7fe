"""Heat flow from a shifted Gaussian approaches a multiple of the Gauss kernel.

The solution never leaves Fourier space: at every frequency node the data
transform is multiplied by exp(-t |xi|^2), the profile P0 exp(-t |xi|^2) is
subtracted, and Plancherel turns the result into a physical L2 norm.

Run:  python demos/01_heat_profile.py
"""

import numpy as np

from asymprofile import AnalyticDatum, EvolutionProblem, decay_fit, gauss_l2_norm, residual_norm, theorem_ratio

n = 2
v0 = AnalyticDatum.gaussian(n, amplitude=1.0, center=(1.0, 0.0), width=1.0)
problem = EvolutionProblem.heat(v0)
print(f"mass P0 = {v0.mass:.6f}, grid R = {problem.grid.R}, angular rule = {problem.grid.angular.kind}")

# the solution itself only decays like the kernel, t^(-n/4)
for t in (1.0, 10.0, 100.0):
    print(f"t={t:6.1f}  ||P0 G(t)|| = {v0.mass * gauss_l2_norm(t, n):.4e}  ||v - P0 G|| = {residual_norm(problem, t):.4e}")

# the residual decays one half power faster
times = np.logspace(2, 4, 49)
fit = decay_fit([(t, residual_norm(problem, t)) for t in times])
print(f"\nfitted slope {fit.slope:.4f} against {-(n / 4 + 0.5):.4f}, r^2 = {fit.r_squared:.8f}")

# residual * t^(n/4 + 1/2) / int |x| |v0| stays bounded: that bound is the constant C
ratios = theorem_ratio(problem, times[::8])
for t, r in ratios:
    print(f"t={t:9.1f}  ratio {r:.6f}")
