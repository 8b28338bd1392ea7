"""Run configuration, CSV/JSON reports, and the F2D1 binary field format.

The CSV column set is a fixed contract (consumed by the offline plot tool);
floats are written with shortest round-trip formatting so parsing the file
recovers every value exactly.  The manifest echoes the full effective
configuration so a run can be reproduced from it alone.
"""

from __future__ import annotations

import dataclasses
import json
import struct
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .experiments import CSV_COLUMNS, ExperimentReport
from .grid import Field2D, GridSpec

__all__ = [
    "RunConfig",
    "UsageError",
    "parse_config",
    "write_report",
    "write_field",
    "read_field",
    "read_csv_rows",
]

EXPERIMENTS = (
    "simulate",
    "limit-study",
    "defect-scan",
    "stability",
    "strichartz-probe",
    "selftest",
)

_F2D1_MAGIC = b"F2D1"


class UsageError(ValueError):
    """Bad flag, bad config key, or out-of-bounds knob (CLI exit code 2)."""


@dataclass
class RunConfig:
    """Every knob of every experiment, with validated defaults."""

    experiment: str = "selftest"
    grid_n: int = 256
    box_length: float = 16 * np.pi
    dt: float = 1e-3
    t_final: float = 2.0
    lambda_list: tuple[float, ...] = (1.0, 0.5, 0.25)
    eta_list: tuple[float, ...] = (1e-1, 1e-2, 1e-3)
    quad_nodes: int = 8
    theta_grid: int = 16
    cutoff_N: float = 4.0
    seed: int = 0
    snapshot_stride: int = 20
    output_dir: str = "runs"
    count: int = 20
    equation: str = "nls"

    def validate(self) -> "RunConfig":
        if self.experiment not in EXPERIMENTS:
            raise UsageError(f"unknown experiment {self.experiment!r}")
        n = self.grid_n
        if n < 8 or (n & (n - 1)) != 0:
            raise UsageError(f"grid_n must be a power of two >= 8, got {n}")
        if self.box_length <= 0:
            raise UsageError("box_length must be positive")
        if self.dt <= 0 or self.t_final <= 0 or self.dt > self.t_final:
            raise UsageError("need 0 < dt <= t_final")
        if not self.lambda_list or any(
            l <= 0 or l > 1 for l in self.lambda_list
        ) or any(b >= a for a, b in zip(self.lambda_list, self.lambda_list[1:])):
            raise UsageError("lambda_list must be strictly decreasing in (0, 1]")
        if not self.eta_list or any(e <= 0 for e in self.eta_list) or any(
            b >= a for a, b in zip(self.eta_list, self.eta_list[1:])
        ):
            raise UsageError("eta_list must be strictly decreasing and positive")
        if not (1 <= self.quad_nodes <= 64):
            raise UsageError("quad_nodes must be in [1, 64]")
        if not (1 <= self.theta_grid <= 1024):
            raise UsageError("theta_grid must be in [1, 1024]")
        if self.cutoff_N <= 0:
            raise UsageError("cutoff_N must be positive")
        if self.snapshot_stride < 1:
            raise UsageError("snapshot_stride must be >= 1")
        if self.count < 1:
            raise UsageError("count must be >= 1")
        if self.equation not in ("nls", "dmnls"):
            raise UsageError(f"equation must be nls or dmnls, got {self.equation!r}")
        return self


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _parse_value(key: str, raw: str):
    if key not in _FIELD_TYPES:
        raise UsageError(f"unknown config key {key!r}")
    if key in ("lambda_list", "eta_list"):
        try:
            return tuple(float(tok) for tok in raw.split(",") if tok.strip())
        except ValueError as exc:
            raise UsageError(f"bad value for {key!r}: {raw!r}") from exc
    target = {"experiment": str, "output_dir": str, "equation": str}.get(key)
    if target is str:
        return raw
    try:
        if key in ("grid_n", "quad_nodes", "theta_grid", "seed", "snapshot_stride", "count"):
            return int(raw)
        return float(raw)
    except ValueError as exc:
        raise UsageError(f"bad value for {key!r}: {raw!r}") from exc


def _read_config_file(path: str) -> dict:
    """Plain key=value lines; '#' starts a comment; unknown keys rejected."""
    out = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        out[key] = _parse_value(key, raw)
    return out


def parse_config(argv: list[str]) -> RunConfig:
    """Build the effective RunConfig: flags override file values override defaults."""
    if not argv:
        raise UsageError(
            "usage: dmnls <experiment> [--config FILE] [--key value ...]; "
            f"experiments: {', '.join(EXPERIMENTS)}"
        )
    experiment = argv[0]
    if experiment not in EXPERIMENTS:
        raise UsageError(
            f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}"
        )
    flag_values: dict = {}
    config_path = None
    i = 1
    while i < len(argv):
        tok = argv[i]
        if not tok.startswith("--"):
            raise UsageError(f"unexpected argument {tok!r}")
        key = tok[2:].replace("-", "_")
        if i + 1 >= len(argv):
            raise UsageError(f"flag {tok!r} needs a value")
        raw = argv[i + 1]
        i += 2
        if key == "config":
            config_path = raw
            continue
        flag_values[key] = _parse_value(key, raw)

    merged: dict = {}
    if config_path is not None:
        merged.update(_read_config_file(config_path))
    merged.update(flag_values)
    merged["experiment"] = experiment
    return RunConfig(**merged).validate()


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)  # shortest round-trip
    return str(value)


def config_as_dict(config: RunConfig) -> dict:
    d = dataclasses.asdict(config)
    d["lambda_list"] = list(d["lambda_list"])
    d["eta_list"] = list(d["eta_list"])
    return d


def write_report(
    report: ExperimentReport,
    out_dir: str | Path,
    config: RunConfig | None = None,
    snapshots: dict[str, Field2D] | None = None,
) -> dict[str, Path]:
    """Emit report.csv, manifest.json, and optional snapshots/*.f2d.

    Returns the written paths.  The CSV carries exactly the contract columns;
    the manifest carries the full configuration echo, the fitted slopes, and
    any experiment extras.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    csv_path = out / "report.csv"
    lines = [",".join(CSV_COLUMNS)]
    for row in report.rows:
        lines.append(",".join(_fmt(v) for v in row.as_csv_values()))
    csv_path.write_text("\n".join(lines) + "\n")

    from . import __version__

    manifest = {
        "experiment": report.experiment,
        "code_version": __version__,
        "config": config_as_dict(config) if config is not None else None,
        "fitted_slopes": report.fitted_slopes,
        "extras": report.manifest,
        "row_errors": {
            str(i): row.error for i, row in enumerate(report.rows) if row.error
        },
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    paths = {"csv": csv_path, "manifest": manifest_path}
    if snapshots:
        snap_dir = out / "snapshots"
        snap_dir.mkdir(exist_ok=True)
        for name, fld in snapshots.items():
            p = snap_dir / f"{name}.f2d"
            write_field(fld, p)
            paths[f"snapshot:{name}"] = p
    return paths


def write_field(f: Field2D, path: str | Path) -> None:
    """Binary field: magic 'F2D1', u32 n, f64 L, n^2 complex128, little-endian row-major."""
    with open(path, "wb") as fh:
        fh.write(_F2D1_MAGIC)
        fh.write(struct.pack("<I", f.grid.n))
        fh.write(struct.pack("<d", f.grid.box_length))
        fh.write(np.ascontiguousarray(f.values, dtype="<c16").tobytes())


def read_field(path: str | Path) -> Field2D:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _F2D1_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        n = struct.unpack("<I", fh.read(4))[0]
        box = struct.unpack("<d", fh.read(8))[0]
        data = np.frombuffer(fh.read(), dtype="<c16")
    if data.size != n * n:
        raise ValueError(f"{path}: expected {n * n} values, got {data.size}")
    return Field2D(GridSpec(box, n), data.reshape(n, n).astype(np.complex128))


def read_csv_rows(path: str | Path) -> list[dict[str, float | None]]:
    """Parse a report.csv back into per-row dicts (round-trip exact floats)."""
    text = Path(path).read_text().strip().splitlines()
    header = text[0].split(",")
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {header}")
    rows = []
    for line in text[1:]:
        cells = line.split(",")
        rows.append(
            {k: (float(c) if c else None) for k, c in zip(header, cells)}
        )
    return rows
