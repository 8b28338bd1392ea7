"""Command-line entry point.

Exit codes: 0 success, 1 experiment assertion failure, 2 usage error,
3 I/O failure.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from .evolution import SolverParams, solve_dmnls, solve_nls
from .experiments import (
    ExperimentReport,
    RunRow,
    default_gaussian,
    defect_scan,
    limit_study,
    selftest,
    stability_probe,
    strichartz_probe,
)
from .grid import band_limited_field, boundary_mass_fraction, make_grid, mass
from .io import RunConfig, UsageError, config_as_dict, parse_config, write_report
from .nonlinearity import gauss_legendre_01

__all__ = ["main", "run"]


def _solver_params(config: RunConfig) -> SolverParams:
    return SolverParams(
        dt=config.dt,
        t_final=config.t_final,
        quad_nodes=config.quad_nodes,
        snapshot_stride=config.snapshot_stride,
    )


def _simulate(config: RunConfig) -> tuple[ExperimentReport, dict]:
    grid = make_grid(config.box_length, config.grid_n)
    phi = default_gaussian(grid)
    params = _solver_params(config)
    rule = gauss_legendre_01(config.quad_nodes)
    solve = solve_nls if config.equation == "nls" else (
        lambda f, p: solve_dmnls(f, p, rule)
    )
    import time

    t0 = time.perf_counter()
    tr = solve(phi, params)
    row = RunRow(
        lam=1.0,
        grid_n=config.grid_n,
        box_length=config.box_length,
        dt=config.dt,
        window=config.t_final,
        boundary_mass=max(boundary_mass_fraction(s) for s in tr.snapshots),
        runtime_sec=time.perf_counter() - t0,
    )
    if config.equation == "nls":
        row.mass_drift_nls = tr.mass_drift
    else:
        row.mass_drift_dmnls = tr.mass_drift
    report = ExperimentReport("simulate", [row])
    snapshots = {
        "initial": tr.snapshots[0],
        "final": tr.snapshots[-1],
    }
    return report, snapshots


def run(config: RunConfig) -> int:
    """Execute one experiment and write its report; returns the exit code."""
    grid = make_grid(config.box_length, config.grid_n)
    params = _solver_params(config)
    rule = gauss_legendre_01(config.quad_nodes)
    snapshots = None

    if config.experiment == "selftest":
        result = selftest()
        for failure in result.failures:
            print(f"FAIL {failure}")
        status = "ok" if result.passed else "FAILED"
        print(
            f"selftest: {result.checks_run} checks, "
            f"{len(result.failures)} failures, {result.elapsed_sec:.1f}s [{status}]"
        )
        return 0 if result.passed else 1

    if config.experiment == "simulate":
        report, snapshots = _simulate(config)
    elif config.experiment == "limit-study":
        phi = default_gaussian(grid)
        report = limit_study(phi, list(config.lambda_list), params, rule)
    elif config.experiment == "defect-scan":
        phi = default_gaussian(grid)
        report = defect_scan(phi, list(config.lambda_list), config.cutoff_N, rule, params)
    elif config.experiment == "stability":
        phi = default_gaussian(grid, amplitude=0.25)
        rng = np.random.default_rng(config.seed)
        pert = band_limited_field(grid, 3, rng, norm=1.0)
        report = stability_probe(
            phi, pert, list(config.eta_list), params, rule, K=config.theta_grid
        )
    elif config.experiment == "strichartz-probe":
        report = strichartz_probe(
            config.seed, config.count, grid, t_final=config.t_final
        )
    else:  # pragma: no cover - parse_config already rejects
        raise UsageError(f"unknown experiment {config.experiment!r}")

    paths = write_report(report, Path(config.output_dir), config, snapshots)
    print(f"wrote {paths['csv']} and {paths['manifest']}")
    failed = [row.error for row in report.rows if row.error]
    for err in failed:
        print(f"row failure: {err}", file=sys.stderr)
    return 1 if failed else 0


def main(argv: list[str] | None = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        config = parse_config(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(config)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
