"""Tour of the spectral grid and the exact free propagator.

A plane wave picks up exactly the phase its mode predicts, a Gaussian follows
the closed-form spreading solution, and the L2 norm never moves: the free
flow is a unitary Fourier multiplier, not a time stepper.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dmnls import free_propagate, gaussian_field, make_grid, mass, plane_wave

grid = make_grid(16 * np.pi, 256)
print(f"box {grid.box_length:.3f}, {grid.n} points/dim, "
      f"mode spacing {grid.mode_spacing:.4f}, Nyquist {grid.nyquist:.1f}")

# --- plane wave: multiplier eigenmode -----------------------------------
pw = plane_wave(grid, (8, 0))   # |xi| = 1 on this box
moved = free_propagate(pw, 0.5)
predicted = np.exp(-0.5j) * pw.values
print(f"plane-wave phase error: {np.abs(moved.values - predicted).max():.2e}")

# --- Gaussian: closed-form spreading ------------------------------------
phi = gaussian_field(grid)
times = [0.0, 0.5, 1.0, 2.0]
fig, axes = plt.subplots(1, len(times), figsize=(3.2 * len(times), 3), sharey=True)
mid = grid.n // 2
for ax, t in zip(axes, times):
    u = free_propagate(phi, t)
    exact = (1 / (1 + 2j * t)) * np.exp(
        -(grid.x1**2 + grid.x2**2) / (2 * (1 + 2j * t))
    )
    err = mass(u) and np.abs(u.values - exact).max()
    ax.plot(grid.x1[:, mid], np.abs(u.values[:, mid]) ** 2)
    ax.set_title(f"t = {t}  (err {err:.1e})")
    ax.set_xlabel("x1")
    print(f"t = {t}: mass {mass(u):.15f}, closed-form error {err:.2e}")
axes[0].set_ylabel("|u|^2 on the x1 axis")
fig.tight_layout()
fig.savefig("demo01_free_gaussian.png", dpi=120)
print("wrote demo01_free_gaussian.png")
