"""One-off acceptance-scale calibration (not part of the package)."""
import json
import time

import numpy as np

from dmnls.analysis import fit_loglog_slope
from dmnls.evolution import SolverParams, picard_short_time, solve_dmnls
from dmnls.experiments import defect_scan, limit_study, stability_probe, default_gaussian
from dmnls.grid import band_limited_field, gaussian_field, make_grid, mass
from dmnls.nonlinearity import gauss_legendre_01

out = {}
t0 = time.time()

grid = make_grid(16 * np.pi, 256)
phi = default_gaussian(grid)
params = SolverParams(dt=1e-3, t_final=2.0, snapshot_stride=20)
rule = gauss_legendre_01(8)

print("=== defect scan (base grid, N=4, lambda 1/2..1/8) ===", flush=True)
rep = defect_scan(phi, [0.5, 0.25, 0.125], 4.0, rule, params)
out["defect_slope"] = rep.fitted_slopes["low_term_vs_lambda"]
out["defect_rows"] = [
    (r.lam, r.low_term, r.high_term, r.dm_high_term, r.defect_rel) for r in rep.rows
]
print(json.dumps(out["defect_rows"]), "slope", out["defect_slope"], flush=True)
print(f"t={time.time()-t0:.0f}s", flush=True)

print("=== picard (0.1 x gaussian, t=0.1, n=256) ===", flush=True)
small = gaussian_field(grid, amplitude=0.1)
pic = picard_short_time(small, 0.1, rule, tol=1e-10, max_iter=8, time_points=51)
rk = solve_dmnls(small, SolverParams(dt=1e-3, t_final=0.1, snapshot_stride=2), rule)
dist = max(mass(a - b) for a, b in zip(pic.snapshots, rk.snapshots))
out["picard_vs_rk4"] = dist
print("picard vs rk4:", dist, flush=True)
print(f"t={time.time()-t0:.0f}s", flush=True)

print("=== stability (n=128, amp 0.25) ===", flush=True)
g128 = make_grid(16 * np.pi, 128)
u0 = gaussian_field(g128, amplitude=0.25)
pert = band_limited_field(g128, 3, np.random.default_rng(0), norm=1.0)
srep = stability_probe(u0, pert, [1e-1, 1e-2, 1e-3], params, rule, K=16)
out["stability_slope"] = srep.fitted_slopes["distance_vs_eta"]
out["stability_rows"] = [(r.eta, r.err_linf_l2, r.err_l4, r.mass_drift_dmnls) for r in srep.rows]
print(json.dumps(out["stability_rows"]), "slope", out["stability_slope"], flush=True)
print(f"t={time.time()-t0:.0f}s", flush=True)

print("=== limit study (n=256, lambda 1, 1/2, 1/4) ===", flush=True)
lrep = limit_study(phi, [1.0, 0.5, 0.25], params, rule)
out["limit_rows"] = [
    (r.lam, r.err_linf_l2, r.err_l4, r.mass_drift_nls, r.mass_drift_dmnls, r.boundary_mass, r.runtime_sec, r.error)
    for r in lrep.rows
]
out["limit_slope"] = lrep.fitted_slopes.get("err_linf_l2_vs_lambda")
out["cross_checks"] = lrep.manifest["cross_check_rel_linf_l2"]
for row in out["limit_rows"]:
    print(row, flush=True)
print("slope", out["limit_slope"], "cross", out["cross_checks"], flush=True)
print(f"TOTAL t={time.time()-t0:.0f}s", flush=True)

with open("/tmp/calibration.json", "w") as fh:
    json.dump(out, fh, indent=2, default=str)
print("saved /tmp/calibration.json", flush=True)
