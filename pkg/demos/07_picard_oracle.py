"""The mild formulation as its own solver, and where it stops working.

For small data and short horizons the Duhamel fixed point converges in a few
sweeps and lands on the RK4 answer; this is the integrator-independent check.
Pushing amplitude or horizon up breaks the contraction, and the iteration
says so instead of pretending.
"""

import numpy as np

from dmnls import (
    PicardNonContraction,
    SolverParams,
    gaussian_field,
    make_grid,
    mass,
    picard_short_time,
    solve_dmnls,
)
from dmnls.nonlinearity import gauss_legendre_01

grid = make_grid(8 * np.pi, 64)
rule = gauss_legendre_01(8)

phi = gaussian_field(grid, amplitude=0.1)
picard = picard_short_time(phi, 0.1, rule, tol=1e-10, time_points=51)
rk4 = solve_dmnls(phi, SolverParams(dt=1e-3, t_final=0.1, snapshot_stride=2), rule)
gap = max(mass(a - b) for a, b in zip(picard.snapshots, rk4.snapshots))
print(f"small data: fixed point agrees with RK4 to {gap:.2e}")

big = gaussian_field(grid, amplitude=50.0)
try:
    picard_short_time(big, 1.0, rule, time_points=17)
except PicardNonContraction as exc:
    print(f"large data: {exc}")
    print("sweep distances:", ["%.3e" % d for d in exc.distances])
