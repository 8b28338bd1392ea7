"""Split the averaging defect into its three mechanisms.

At scale lambda the residual F - F_DM of a rescaled field splits exactly into
a low-frequency piece (where the cancellation lives and which shrinks like
lambda^2), plus two high-frequency pieces that a larger cutoff N makes small.
The pointwise identity low + high - dm_high = defect holds to round-off.
"""

import numpy as np

from dmnls import SolverParams, defect, gaussian_field, make_grid, mass, rescale, solve_nls
from dmnls.analysis import decomposition_fields, decomposition_terms
from dmnls.nonlinearity import gauss_legendre_01

grid = make_grid(8 * np.pi, 64)
phi = gaussian_field(grid)
rule = gauss_legendre_01(8)

snapshot = solve_nls(phi, SolverParams(dt=1e-3, t_final=0.2, snapshot_stride=100)).snapshots[-1]

print("pointwise identity at one snapshot:")
for lam in (0.5, 0.25):
    low, high, dm_high = decomposition_fields(snapshot, lam, 4.0, rule)
    resid = mass((low + high - dm_high) - defect(rescale(snapshot, lam), rule))
    print(f"  lambda = {lam}: ||sum of pieces - defect|| = {resid:.2e}")

print("\nsize of the pieces along a short trajectory (N = 4):")
base = solve_nls(phi, SolverParams(dt=1e-3, t_final=0.5, snapshot_stride=100))
print(f"{'lambda':>8} {'low':>12} {'high':>12} {'dm_high':>12}")
prev = None
for lam in (0.5, 0.25, 0.125):
    rep = decomposition_terms(base, lam, 4.0, rule)
    note = f"   low ratio {prev / rep.low_term:.2f}" if prev else ""
    print(f"{lam:8.4f} {rep.low_term:12.4e} {rep.high_term:12.4e} {rep.dm_high_term:12.4e}{note}")
    prev = rep.low_term
print("\nthe low piece drops ~4x per halving of lambda; the high pieces track the tail of the datum")
