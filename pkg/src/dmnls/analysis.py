"""Scale transform, discrete space-time norms, and defect diagnostics.

The mass-critical rescaling (lam * u(lam^2 t, lam * x)) is represented exactly:
scaling the box length by 1/lam absorbs the spatial dilation, so no
interpolation ever happens.  Space-time norms integrate stored snapshots by
the trapezoid rule in time; the sup over the propagator shift theta is taken
on a uniform grid over [0, 1] whose size is a reported knob, not a claim
about the true supremum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field2D, GridSpec, fft2, free_propagate, ifft2, lp_norm, mass, project_low
from .evolution import Trace
from .nonlinearity import QuadratureRule, _averaged_cubic_raw, cubic

__all__ = [
    "NormReport",
    "DecompositionReport",
    "rescale",
    "rescale_trace",
    "spacetime_norms",
    "shifted_duhamel_ratio",
    "decomposition_fields",
    "decomposition_terms",
    "scattering_diagnostic",
    "tail_diameter",
    "fit_loglog_slope",
]


@dataclass(frozen=True)
class NormReport:
    """Windowed space-time norms of one trace."""

    linf_l2: float
    l4_spacetime: float
    shifted_sup_l4: float
    window: tuple[float, float]
    theta_grid_size: int


@dataclass(frozen=True)
class DecompositionReport:
    """L^{4/3} space-time sizes of the three defect pieces at one (lam, N)."""

    low_term: float
    high_term: float
    dm_high_term: float
    lam: float
    cutoff_N: float


def rescale(f: Field2D, lam: float) -> Field2D:
    """Mass-critical rescaling: amplitude lam, box length L/lam, same samples.

    The value at array index (i, j) of the output is lam * f[i, j]; the
    coordinate map x -> lam*x is carried entirely by the new box length, so
    the transform is an exact L2 isometry and an exact involution pair with
    1/lam.
    """
    if lam <= 0:
        raise ValueError("scale factor must be positive")
    new_grid = GridSpec(f.grid.box_length / lam, f.grid.n)
    return Field2D(new_grid, lam * f.values)


def rescale_trace(tr: Trace, lam: float) -> Trace:
    """Rescale every snapshot and stretch times by 1/lam^2."""
    snaps = [rescale(s, lam) for s in tr.snapshots]
    return Trace(tr.times / lam**2, snaps, snaps[0].grid, tr.equation_tag)


def _select_window(tr: Trace, window: tuple[float, float] | None) -> np.ndarray:
    if window is None:
        return np.arange(len(tr.times))
    lo, hi = window
    idx = np.nonzero((tr.times >= lo - 1e-12) & (tr.times <= hi + 1e-12))[0]
    if idx.size == 0:
        raise ValueError(f"no stored snapshots inside window {window}")
    return idx


def _time_lp(values_p: np.ndarray, times: np.ndarray, p: float, window_len: float) -> float:
    """Trapezoid in time of per-snapshot L^p_x norms raised to p, then 1/p root."""
    if times.size == 1:
        return float((window_len * values_p[0]) ** (1.0 / p))
    return float(np.trapezoid(values_p, times) ** (1.0 / p))


def spacetime_norms(
    tr: Trace, K: int, window: tuple[float, float] | None = None
) -> NormReport:
    """sup-in-time L2, space-time L4, and the theta-shifted sup of the latter.

    The shifted norm scans theta in {0, 1/K, ..., 1} and reports the largest
    L4 space-time norm of e^{i theta Lap} applied snapshot-wise.  A single
    stored snapshot with an explicit window is treated as constant in time.
    """
    if K < 1:
        raise ValueError("theta grid size K must be >= 1")
    idx = _select_window(tr, window)
    times = tr.times[idx]
    snaps = [tr.snapshots[i] for i in idx]
    window_len = (window[1] - window[0]) if window is not None else 0.0

    linf_l2 = max(mass(s) for s in snaps)

    cell = tr.grid.cell_area
    l4x_4 = np.array([cell * np.sum(np.abs(s.values) ** 4) for s in snaps])
    l4 = _time_lp(l4x_4, times, 4.0, window_len)

    k2 = tr.grid.k2
    hats = np.stack([fft2(s.values) for s in snaps])
    sup = 0.0
    for j in range(K + 1):
        theta = j / K
        shifted = ifft2(np.exp(-1j * theta * k2)[None, :, :] * hats)
        sl4_4 = cell * np.sum(np.abs(shifted) ** 4, axis=(1, 2))
        sup = max(sup, _time_lp(sl4_4, times, 4.0, window_len))

    report_window = window if window is not None else (float(times[0]), float(times[-1]))
    return NormReport(float(linf_l2), float(l4), float(sup), report_window, K)


def shifted_duhamel_ratio(forcing: Trace, theta: float, sigma: float) -> float:
    """Gain of the shifted Duhamel map on a stored forcing trajectory.

    Returns  || int_0^t e^{i(t-s+theta-sigma) Lap} F(s) ds ||_{L4_{t,x}}
    divided by ||F||_{L^{4/3}_{t,x}}, both over the trace window, the inner
    integral by cumulative trapezoid on the stored times.  The kernel depends
    on theta and sigma only through their difference.
    """
    times = forcing.times
    if times.size < 2:
        raise ValueError("forcing trace needs at least two stored times")
    grid = forcing.grid
    cell = grid.cell_area
    k2 = grid.k2

    l43_4 = np.array(
        [cell * np.sum(np.abs(s.values) ** (4.0 / 3.0)) for s in forcing.snapshots]
    )
    denom = np.trapezoid(l43_4, times) ** 0.75
    if denom == 0.0:
        raise ValueError("zero forcing: ratio undefined")

    shift = theta - sigma
    hats = np.stack([fft2(s.values) for s in forcing.snapshots])
    undone = np.exp(1j * times[:, None, None] * k2[None, :, :]) * hats  # e^{-i s Lap} F(s)
    integral = np.empty_like(undone)
    integral[0] = 0.0
    for j in range(1, times.size):
        dt = times[j] - times[j - 1]
        integral[j] = integral[j - 1] + (0.5 * dt) * (undone[j - 1] + undone[j])
    out = ifft2(np.exp(-1j * (times[:, None, None] + shift) * k2[None, :, :]) * integral)
    num_4 = cell * np.sum(np.abs(out) ** 4, axis=(1, 2))
    num = np.trapezoid(num_4, times) ** 0.25
    return float(num / denom)


def decomposition_fields(
    u: Field2D, lam: float, N: float, rule: QuadratureRule
) -> tuple[Field2D, Field2D, Field2D]:
    """The three defect pieces at one snapshot of a base trajectory.

    With a = rescale(u, lam) and b = rescale(P_{<=N} u, lam):

        low     = F(b) - F_DM(b)
        high    = F(a) - F(b)
        dm_high = F_DM(a) - F_DM(b)

    so that low + high - dm_high == F(a) - F_DM(a) = defect(a) identically.
    """
    a = rescale(u, lam)
    b = rescale(project_low(u, N), lam)
    grid = a.grid
    dm_a = Field2D(grid, _averaged_cubic_raw(a.values, grid, rule))
    dm_b = Field2D(grid, _averaged_cubic_raw(b.values, grid, rule))
    low = cubic(b) - dm_b
    high = cubic(a) - cubic(b)
    dm_high = dm_a - dm_b
    return low, high, dm_high


def decomposition_terms(
    base_u: Trace, lam: float, N: float, rule: QuadratureRule
) -> DecompositionReport:
    """L^{4/3} space-time norms of the defect pieces over the rescaled window.

    The base trajectory is rescaled snapshot by snapshot (times stretch by
    1/lam^2); the frequency cutoff N applies to the base field, below the
    base grid's Nyquist mode.
    """
    if N >= base_u.grid.nyquist:
        raise ValueError(
            f"cutoff N = {N} must lie below the base Nyquist {base_u.grid.nyquist}"
        )
    times = base_u.times / lam**2
    p = 4.0 / 3.0
    sizes = np.empty((3, times.size))
    for j, snap in enumerate(base_u.snapshots):
        pieces = decomposition_fields(snap, lam, N, rule)
        for i, piece in enumerate(pieces):
            sizes[i, j] = lp_norm(piece, p) ** p
    low, high, dm_high = (np.trapezoid(sizes[i], times) ** (1.0 / p) for i in range(3))
    return DecompositionReport(float(low), float(high), float(dm_high), lam, N)


def scattering_diagnostic(tr: Trace) -> list[tuple[tuple[float, float], float]]:
    """Cauchy test for scattering: distances of the undone trajectory.

    Returns [((t_i, t_j), ||e^{-i t_i Lap} v(t_i) - e^{-i t_j Lap} v(t_j)||_L2)]
    for all stored pairs i < j.  A profile settling down (tail diameter
    shrinking) is numerical evidence of scattering on the window; it proves
    nothing beyond it.
    """
    if len(tr.snapshots) < 3:
        raise ValueError("need at least three snapshots to probe the tail")
    profiles = [
        free_propagate(s, -t) for s, t in zip(tr.snapshots, tr.times)
    ]
    out = []
    for i in range(len(profiles)):
        for j in range(i + 1, len(profiles)):
            d = mass(profiles[i] - profiles[j])
            out.append(((float(tr.times[i]), float(tr.times[j])), float(d)))
    return out


def tail_diameter(
    pairs: list[tuple[tuple[float, float], float]], window: tuple[float, float]
) -> float:
    """Largest pairwise distance among profile times inside the window."""
    lo, hi = window
    sel = [d for (ti, tj), d in pairs if lo <= ti <= hi and lo <= tj <= hi]
    if not sel:
        raise ValueError(f"no snapshot pairs inside window {window}")
    return max(sel)


def fit_loglog_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log y against log x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size or x.size < 2:
        raise ValueError("need at least two points to fit a slope")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit needs positive data")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])
