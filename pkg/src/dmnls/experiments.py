"""Orchestrated studies: scaling-limit sweep, defect scan, stability and
Strichartz probes, and a fast self-test of every module invariant.

Each study returns an ExperimentReport whose rows map one-to-one onto the
CSV contract of the io module.  Rows are produced in deterministic order from
the configuration and seed alone; wall-clock runtime is the only
nondeterministic column.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import grid as g, nonlinearity as nl
from .analysis import (
    decomposition_terms,
    fit_loglog_slope,
    rescale,
    rescale_trace,
    shifted_duhamel_ratio,
    spacetime_norms,
)
from .evolution import (
    PicardNonContraction,
    SolverInstabilityError,
    SolverParams,
    Trace,
    solve_dmnls,
    solve_nls,
)
from .grid import Field2D, GridSpec, band_limited_field, gaussian_field, mass, plane_wave
from .nonlinearity import QuadratureRule, cubic, defect, dm_nonlinearity, gauss_legendre_01

__all__ = [
    "RunRow",
    "ExperimentReport",
    "SelftestResult",
    "default_gaussian",
    "limit_study",
    "defect_scan",
    "stability_probe",
    "strichartz_probe",
    "selftest",
]

CSV_COLUMNS = (
    "lambda",
    "eta",
    "grid_n",
    "box_length",
    "dt",
    "window",
    "err_linf_l2",
    "err_l4",
    "defect_rel",
    "low_term",
    "high_term",
    "dm_high_term",
    "mass_drift_nls",
    "mass_drift_dmnls",
    "boundary_mass",
    "runtime_sec",
)


@dataclass
class RunRow:
    """One sweep point; None fields become empty CSV cells."""

    lam: float | None = None
    eta: float | None = None
    grid_n: int | None = None
    box_length: float | None = None
    dt: float | None = None
    window: float | None = None
    err_linf_l2: float | None = None
    err_l4: float | None = None
    defect_rel: float | None = None
    low_term: float | None = None
    high_term: float | None = None
    dm_high_term: float | None = None
    mass_drift_nls: float | None = None
    mass_drift_dmnls: float | None = None
    boundary_mass: float | None = None
    runtime_sec: float | None = None
    error: str | None = None  # set when the row's run failed; not a CSV column

    def as_csv_values(self) -> list[float | int | None]:
        return [
            self.lam,
            self.eta,
            self.grid_n,
            self.box_length,
            self.dt,
            self.window,
            self.err_linf_l2,
            self.err_l4,
            self.defect_rel,
            self.low_term,
            self.high_term,
            self.dm_high_term,
            self.mass_drift_nls,
            self.mass_drift_dmnls,
            self.boundary_mass,
            self.runtime_sec,
        ]


@dataclass
class ExperimentReport:
    """Rows plus fitted slopes plus the manifest needed to reproduce them."""

    experiment: str
    rows: list[RunRow]
    fitted_slopes: dict[str, float] = field(default_factory=dict)
    manifest: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.rows:
            raise ValueError("report must contain at least one row")


@dataclass
class SelftestResult:
    checks_run: int
    failures: list[str]
    elapsed_sec: float

    @property
    def passed(self) -> bool:
        return not self.failures


def default_gaussian(grid: GridSpec, amplitude: float = 1.0) -> Field2D:
    """The reference datum: a unit-width centered Gaussian."""
    return gaussian_field(grid, width=1.0, amplitude=amplitude)


def _max_boundary(traces: list[Trace]) -> float:
    return max(
        g.boundary_mass_fraction(s) for tr in traces for s in tr.snapshots
    )


def _trace_errors(u: Trace, v: Trace) -> tuple[float, float]:
    """sup-in-time L2 and space-time L4 size of the difference of two runs."""
    if u.times.shape != v.times.shape or not np.allclose(u.times, v.times):
        raise ValueError("traces are not sampled on matching times")
    cell = u.grid.cell_area
    linf = 0.0
    l4_4 = np.empty(u.times.size)
    for j, (a, b) in enumerate(zip(u.snapshots, v.snapshots)):
        d = a.values - b.values
        p2 = d.real**2 + d.imag**2
        linf = max(linf, float(np.sqrt(cell * p2.sum())))
        l4_4[j] = cell * np.sum(p2**2)
    return linf, float(np.trapezoid(l4_4, u.times) ** 0.25)


def limit_study(
    phi: Field2D,
    lambdas: list[float],
    params: SolverParams,
    rule: QuadratureRule | None = None,
    cross_check_tol: float = 1e-6,
) -> ExperimentReport:
    """Scaling-limit sweep: rescaled NLS vs dispersion-managed runs per lambda.

    For each lambda the data is rescaled onto the box L/lambda, both equations
    are integrated over the stretched horizon t_final/lambda^2 with
    dt/lambda^2 (the rescaled NLS run is step-for-step the rescaling of the
    base run, which is verified against `cross_check_tol` and recorded), and
    the difference of the two runs is measured in sup-L2 and space-time L4.
    """
    lams = list(lambdas)
    if not lams or any(l <= 0 or l > 1 for l in lams) or any(
        b >= a for a, b in zip(lams, lams[1:])
    ):
        raise ValueError("lambdas must be strictly decreasing in (0, 1]")
    if rule is None:
        rule = gauss_legendre_01(params.quad_nodes)

    base = solve_nls(phi, params)
    rows: list[RunRow] = []
    cross_checks: dict[str, float] = {}
    for lam in lams:
        t0 = time.perf_counter()
        row = RunRow(
            lam=lam,
            grid_n=phi.grid.n,
            box_length=phi.grid.box_length / lam,
            dt=params.dt / lam**2,
            window=params.t_final / lam**2,
        )
        try:
            phi_l = rescale(phi, lam)
            params_l = replace(
                params, dt=params.dt / lam**2, t_final=params.t_final / lam**2
            )
            u_l = solve_nls(phi_l, params_l) if lam != 1.0 else base
            ref = rescale_trace(base, lam)
            cc_linf, _ = _trace_errors(u_l, ref)
            denom = mass(phi_l)
            cross_checks[f"lambda={lam!r}"] = cc_linf / denom if denom else cc_linf
            if denom and cc_linf / denom > cross_check_tol:
                raise SolverInstabilityError(
                    f"scaling cross-check {cc_linf / denom:.3e} exceeds "
                    f"{cross_check_tol:.1e} at lambda={lam}",
                    params_l.t_final,
                    cc_linf / denom,
                )
            v_l = solve_dmnls(phi_l, params_l, rule)
            row.err_linf_l2, row.err_l4 = _trace_errors(u_l, v_l)
            row.mass_drift_nls = u_l.mass_drift
            row.mass_drift_dmnls = v_l.mass_drift
            row.boundary_mass = _max_boundary([u_l, v_l])
        except (SolverInstabilityError, PicardNonContraction) as exc:
            row.error = str(exc)
        row.runtime_sec = time.perf_counter() - t0
        rows.append(row)

    slopes = {}
    good = [(r.lam, r.err_linf_l2) for r in rows if r.error is None and r.err_linf_l2]
    if len(good) >= 2:
        slopes["err_linf_l2_vs_lambda"] = fit_loglog_slope(
            np.array([x for x, _ in good]), np.array([y for _, y in good])
        )
    manifest = {"cross_check_rel_linf_l2": cross_checks}
    return ExperimentReport("limit-study", rows, slopes, manifest)


def defect_scan(
    phi: Field2D,
    lambdas: list[float],
    N: float,
    rule: QuadratureRule,
    params: SolverParams,
) -> ExperimentReport:
    """Defect decomposition sizes per lambda along one base trajectory.

    Needs a single base NLS run; each row rescales its snapshots, splits the
    defect into the low / high / dm-high pieces at cutoff N, and reports their
    space-time L^{4/3} norms together with the aggregate relative defect
    ||F - F_DM|| / ||F|| in the same norm.
    """
    lams = list(lambdas)
    if not lams or any(l <= 0 or l > 1 for l in lams):
        raise ValueError("lambdas must lie in (0, 1]")
    base = solve_nls(phi, params)

    rows: list[RunRow] = []
    for lam in lams:
        t0 = time.perf_counter()
        rep = decomposition_terms(base, lam, N, rule)
        times_l = base.times / lam**2
        p = 4.0 / 3.0
        def_p = np.empty(times_l.size)
        cub_p = np.empty(times_l.size)
        bnd = 0.0
        for j, snap in enumerate(base.snapshots):
            a = rescale(snap, lam)
            def_p[j] = g.lp_norm(defect(a, rule), p) ** p
            cub_p[j] = g.lp_norm(cubic(a), p) ** p
            bnd = max(bnd, g.boundary_mass_fraction(a))
        defect_rel = float(
            np.trapezoid(def_p, times_l) ** (1 / p) / np.trapezoid(cub_p, times_l) ** (1 / p)
        )
        rows.append(
            RunRow(
                lam=lam,
                grid_n=phi.grid.n,
                box_length=phi.grid.box_length / lam,
                dt=params.dt,
                window=params.t_final / lam**2,
                defect_rel=defect_rel,
                low_term=rep.low_term,
                high_term=rep.high_term,
                dm_high_term=rep.dm_high_term,
                mass_drift_nls=base.mass_drift,
                boundary_mass=bnd,
                runtime_sec=time.perf_counter() - t0,
            )
        )

    slopes = {}
    good = [(r.lam, r.low_term) for r in rows if r.low_term]
    if len(good) >= 2:
        slopes["low_term_vs_lambda"] = fit_loglog_slope(
            np.array([x for x, _ in good]), np.array([y for _, y in good])
        )
    return ExperimentReport("defect-scan", rows, slopes)


def stability_probe(
    u0: Field2D,
    perturbation: Field2D,
    etas: list[float],
    params: SolverParams,
    rule: QuadratureRule | None = None,
    K: int = 16,
) -> ExperimentReport:
    """Response of the dispersion-managed flow to data perturbations of size eta.

    The perturbation must have unit L2 norm.  Each row integrates from
    u0 + eta * perturbation and measures the distance to the unperturbed run
    in sup-L2 and in the theta-shifted sup of space-time L4; the fitted
    log-log slope of the sup-L2 distance against eta is the linear-response
    exponent.
    """
    if abs(mass(perturbation) - 1.0) > 1e-12:
        raise ValueError("perturbation must be L2-normalized")
    ets = list(etas)
    if not ets or any(e < 0 for e in ets) or any(b >= a for a, b in zip(ets, ets[1:])):
        raise ValueError("etas must be strictly decreasing and nonnegative")
    if rule is None:
        rule = gauss_legendre_01(params.quad_nodes)

    baseline = solve_dmnls(u0, params, rule)
    rows: list[RunRow] = []
    for eta in ets:
        t0 = time.perf_counter()
        row = RunRow(
            eta=eta,
            grid_n=u0.grid.n,
            box_length=u0.grid.box_length,
            dt=params.dt,
            window=params.t_final,
        )
        try:
            data = u0 + eta * perturbation
            run = solve_dmnls(data, params, rule)
            row.err_linf_l2, _ = _trace_errors(baseline, run)
            diff = Trace(
                run.times,
                [a - b for a, b in zip(run.snapshots, baseline.snapshots)],
                run.grid,
                run.equation_tag,
            )
            row.err_l4 = spacetime_norms(diff, K).shifted_sup_l4
            row.mass_drift_dmnls = run.mass_drift
            row.boundary_mass = _max_boundary([run])
        except SolverInstabilityError as exc:
            row.error = str(exc)
        row.runtime_sec = time.perf_counter() - t0
        rows.append(row)

    slopes = {}
    good = [(r.eta, r.err_linf_l2) for r in rows if r.error is None and r.err_linf_l2]
    if len(good) >= 2:
        slopes["distance_vs_eta"] = fit_loglog_slope(
            np.array([x for x, _ in good]), np.array([y for _, y in good])
        )
    return ExperimentReport("stability", rows, slopes)


def _random_forcing(
    grid: GridSpec, rng: np.random.Generator, times: np.ndarray, max_mode: int
) -> Trace:
    """Band-limited forcing with a few smooth random time envelopes."""
    parts = []
    for _ in range(3):
        f = band_limited_field(grid, max_mode, rng)
        omega = rng.uniform(0.0, 4.0)
        phase = rng.uniform(0.0, 2 * np.pi)
        parts.append((f.values, omega, phase))
    snaps = []
    for t in times:
        acc = np.zeros((grid.n, grid.n), dtype=np.complex128)
        for v, omega, phase in parts:
            acc += np.cos(omega * t + phase) * v
        snaps.append(Field2D(grid, acc))
    return Trace(times, snaps, grid, "nls")


def strichartz_probe(
    seed: int,
    count: int,
    grid: GridSpec,
    t_final: float = 1.0,
    time_points: int = 17,
    K_shift: int = 8,
    max_mode: int = 4,
) -> ExperimentReport:
    """Empirical uniformity of the shifted Duhamel gain over the (theta, sigma) grid.

    For `count` seeded band-limited forcings, the ratio is scanned over
    (theta, sigma) in {0, 1/K, ..., 1}^2 and each row records the per-forcing
    max, min, and spread max/min in the manifest's `ratio_stats`.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    times = np.linspace(0.0, t_final, time_points)
    thetas = np.arange(K_shift + 1) / K_shift

    rows: list[RunRow] = []
    stats = []
    for idx in range(count):
        t0 = time.perf_counter()
        forcing = _random_forcing(grid, rng, times, max_mode)
        ratios = {}
        for th in thetas:
            for sg in thetas:
                shift = th - sg
                if shift not in ratios:
                    ratios[shift] = shifted_duhamel_ratio(forcing, th, sg)
        vals = np.array(list(ratios.values()))
        stats.append(
            {
                "forcing": idx,
                "max": float(vals.max()),
                "min": float(vals.min()),
                "spread": float(vals.max() / vals.min()),
            }
        )
        rows.append(
            RunRow(
                eta=float(idx),
                grid_n=grid.n,
                box_length=grid.box_length,
                window=t_final,
                runtime_sec=time.perf_counter() - t0,
            )
        )
    manifest = {"ratio_stats": stats, "theta_grid": [float(t) for t in thetas]}
    return ExperimentReport("strichartz-probe", rows, manifest=manifest)


def _check(name, fn, failures):
    try:
        fn()
    except AssertionError as exc:
        failures.append(f"{name}: {exc}")
    except Exception as exc:  # noqa: BLE001 - selftest aggregates everything
        failures.append(f"{name}: {type(exc).__name__}: {exc}")


def selftest(
    n: int = 64,
    cutoff_profile=None,
    rule: QuadratureRule | None = None,
) -> SelftestResult:
    """Fast invariant sweep over every module at reduced size.

    `cutoff_profile` and `rule` exist for fault injection: pass a broken
    projection profile or a perturbed quadrature rule and the corresponding
    invariant check must report a failure.
    """
    start = time.perf_counter()
    failures: list[str] = []
    # Unit mode spacing so the N = 3 cutoff genuinely splits the test field.
    gr = g.make_grid(2 * np.pi, n)
    rng = np.random.default_rng(7)
    f = band_limited_field(gr, 6, rng)
    if rule is None:
        rule = gauss_legendre_01(8)

    def unitarity():
        for theta in (-10.0, -1.3, 0.7, 10.0):
            m = mass(g.free_propagate(f, theta))
            assert abs(m - mass(f)) <= 1e-12 * mass(f), f"theta={theta}: {m}"

    def group_law():
        a, b = 0.37, -1.21
        lhs = g.free_propagate(g.free_propagate(f, a), b)
        rhs = g.free_propagate(f, a + b)
        assert mass(lhs - rhs) <= 1e-12 * mass(f)

    def projection():
        N = 2.0
        # Idempotence holds where the cutoff is flat, so clear the taper band.
        fh = g.fft2(f.values)
        radial = np.sqrt(gr.k2)
        fh[(radial > N) & (radial < 2 * N)] = 0.0
        flat = g.Field2D(gr, g.ifft2(fh))
        once = g.project_low(flat, N, cutoff_profile)
        twice = g.project_low(once, N, cutoff_profile)
        assert mass(once - twice) <= 1e-12 * max(mass(flat), 1.0), "not idempotent"
        back = g.project_low(f, N, cutoff_profile) + g.project_high(f, N, cutoff_profile)
        assert mass(back - f) <= 1e-12 * mass(f), "low + high != identity"

    def bernstein():
        N = 3.0
        low = g.project_low(f, N, cutoff_profile)
        gx, gy = g.gradient(low)
        grad_mass = np.sqrt(mass(gx) ** 2 + mass(gy) ** 2)
        assert grad_mass <= 2 * N * mass(f) * (1 + 1e-12), f"{grad_mass} > 2N||f||"
        fx, fy = g.gradient(f)
        gnorm = np.sqrt(mass(fx) ** 2 + mass(fy) ** 2)
        high = g.project_high(f, N, cutoff_profile)
        assert mass(high) <= gnorm / N * (1 + 1e-12), "high-frequency bound"

    def parseval():
        fh = g.fft2(f.values)
        spec = np.sqrt(gr.cell_area * np.sum(np.abs(fh) ** 2) / gr.n**2)
        assert abs(spec - mass(f)) <= 1e-12 * mass(f)

    def plane_wave_identity():
        pw = plane_wave(gr, (1, 0))
        out = dm_nonlinearity(pw, rule)
        assert mass(out - pw) <= 1e-10, f"|F_DM(pw) - pw| = {mass(out - pw):.3e}"

    def gauge_covariance():
        alpha = 0.81
        rotated = dm_nonlinearity(np.exp(1j * alpha) * f, rule)
        straight = np.exp(1j * alpha) * dm_nonlinearity(f, rule)
        assert mass(rotated - straight) <= 1e-12 * max(mass(straight), 1.0)

    def orthogonality():
        fdm = dm_nonlinearity(f, rule)
        val = complex(1j * g.inner(fdm, f))
        scale = mass(f) * mass(fdm)
        assert abs(val.real) <= 1e-10 * max(scale, 1e-30), f"Re<iF_DM,f> = {val.real:.3e}"

    def commutator_cancels():
        pw = plane_wave(gr, (2, 1))
        d = nl.dH_dtau(pw, 0.4)
        assert mass(d) <= 1e-10 * mass(pw)

    def rescale_isometry():
        lam = 0.5
        r = rescale(f, lam)
        assert abs(mass(r) - mass(f)) <= 1e-12 * mass(f)
        back = rescale(r, 1 / lam)
        assert mass(back - f) <= 1e-12 * mass(f)

    def solver_smoke():
        params = SolverParams(dt=1e-2, t_final=0.2, snapshot_stride=5)
        u = solve_nls(0.5 * f, params)
        assert u.mass_drift <= 1e-8, f"nls drift {u.mass_drift:.3e}"
        pw = plane_wave(gr, (1, 0), amplitude=0.5)
        a = solve_nls(pw, params)
        b = solve_dmnls(pw, params, rule)
        err = max(mass(x - y) for x, y in zip(a.snapshots, b.snapshots))
        assert err <= 1e-8, f"plane-wave nls/dmnls split {err:.3e}"

    def duhamel_difference_dependence():
        times = np.linspace(0.0, 0.5, 9)
        forcing = _random_forcing(gr, np.random.default_rng(3), times, 3)
        r1 = shifted_duhamel_ratio(forcing, 0.75, 0.25)
        r2 = shifted_duhamel_ratio(forcing, 0.5, 0.0)
        assert r1 == r2, f"{r1} != {r2}"

    checks = [
        ("unitarity", unitarity),
        ("group_law", group_law),
        ("projection", projection),
        ("bernstein", bernstein),
        ("parseval", parseval),
        ("plane_wave_identity", plane_wave_identity),
        ("gauge_covariance", gauge_covariance),
        ("orthogonality", orthogonality),
        ("commutator_cancels", commutator_cancels),
        ("rescale_isometry", rescale_isometry),
        ("solver_smoke", solver_smoke),
        ("duhamel_difference_dependence", duhamel_difference_dependence),
    ]
    for name, fn in checks:
        _check(name, fn, failures)
    return SelftestResult(len(checks), failures, time.perf_counter() - start)
