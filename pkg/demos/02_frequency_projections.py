"""Smooth frequency cutoffs and the derivative bounds they buy.

The low-pass multiplier is 1 up to the cutoff N, rolls off smoothly to zero
at 2N, and its complement recovers the field exactly.  The classical
trade-offs hold with explicit constants for this profile: a gradient on the
low piece costs at most 2N, and the high piece is controlled by N^{-1} of a
gradient.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dmnls import band_limited_field, gradient, make_grid, mass, project_high, project_low
from dmnls.grid import low_pass_multiplier

grid = make_grid(2 * np.pi, 128)
rng = np.random.default_rng(11)
f = band_limited_field(grid, 24, rng)
N = 8.0

low = project_low(f, N)
high = project_high(f, N)
print(f"||f|| = {mass(f):.6f},  ||low|| = {mass(low):.6f},  ||high|| = {mass(high):.6f}")
print(f"partition defect ||low + high - f|| = {mass(low + high - f):.2e}")

gx, gy = gradient(low)
grad_low = np.hypot(mass(gx), mass(gy))
print(f"||grad low|| = {grad_low:.4f}  <=  2 N ||f|| = {2 * N * mass(f):.4f}")

fx, fy = gradient(f)
grad_f = np.hypot(mass(fx), mass(fy))
print(f"||high|| = {mass(high):.4f}  <=  ||grad f|| / N = {grad_f / N:.4f}")

# radial picture of the cutoff and the split spectrum
mult = low_pass_multiplier(grid, N)
radial = np.sqrt(grid.k2).ravel()
order = np.argsort(radial)
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.2))
ax1.plot(radial[order], mult.ravel()[order], lw=0.8)
ax1.axvline(N, color="k", ls=":"), ax1.axvline(2 * N, color="k", ls=":")
ax1.set_xlabel("|xi|"), ax1.set_ylabel("cutoff value"), ax1.set_xlim(0, 3 * N)
for part, label in ((f, "full"), (low, "low"), (high, "high")):
    spec = np.abs(np.fft.fft2(part.values)).ravel()
    ax2.semilogy(radial[order], np.maximum(spec[order], 1e-18), lw=0.6, label=label)
ax2.set_xlabel("|xi|"), ax2.set_ylabel("|coefficient|"), ax2.set_xlim(0, 3 * N)
ax2.legend()
fig.tight_layout()
fig.savefig("demo02_projections.png", dpi=120)
print("wrote demo02_projections.png")
