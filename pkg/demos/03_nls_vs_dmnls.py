"""Integrate the plain and the dispersion-managed cubic equation side by side.

Same Gaussian datum, same interaction-picture RK4; the only difference is
whether the cubic term is averaged over one period of the free flow.  Both
runs conserve mass to near round-off, and the two solutions drift apart at a
rate set by the size of that averaging correction.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dmnls import SolverParams, gaussian_field, make_grid, mass, solve_dmnls, solve_nls

grid = make_grid(8 * np.pi, 64)
phi = gaussian_field(grid)
params = SolverParams(dt=1e-3, t_final=2.0, snapshot_stride=100)

u = solve_nls(phi, params)
v = solve_dmnls(phi, params)
print(f"mass drift: nls {u.mass_drift:.2e}, dmnls {v.mass_drift:.2e}")

gap = [mass(a - b) for a, b in zip(u.snapshots, v.snapshots)]
for t, d in zip(u.times[::4], gap[::4]):
    print(f"t = {t:4.1f}   ||u - v|| = {d:.4f}")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.2))
ax1.plot(u.times, gap)
ax1.set_xlabel("t"), ax1.set_ylabel("||u - v||_L2")
ax1.set_title("averaging correction accumulates")
mid = grid.n // 2
ax2.plot(grid.x1[:, mid], np.abs(u.snapshots[-1].values[:, mid]) ** 2, label="plain")
ax2.plot(grid.x1[:, mid], np.abs(v.snapshots[-1].values[:, mid]) ** 2, "--", label="averaged")
ax2.set_xlabel("x1"), ax2.set_ylabel("|u(2)|^2"), ax2.legend()
fig.tight_layout()
fig.savefig("demo03_nls_vs_dmnls.png", dpi=120)
print("wrote demo03_nls_vs_dmnls.png")
