"""Time integration for the cubic NLS and the dispersion-managed NLS.

Both equations are integrated with classical RK4 in the interaction picture:
per step the unknown is w(tau) = e^{-i*tau*Laplacian} u(t_n + tau), whose
evolution has no stiff linear part, and the free flow is applied exactly
through its Fourier symbol.  The averaged nonlinearity is nonlocal in
frequency, so splitting methods do not apply to it; the same interaction
scheme handles the plain cubic as the single-node sigma = 0 case.  A Strang
split-step integrator is kept for the plain NLS as an independent cross-check.

`picard_short_time` realizes the mild (Duhamel) formulation as a fixed-point
iteration on a stored time grid.  It shares no stepping code with the RK4
path and serves as an integrator-independent oracle for short times; when the
iteration fails to contract it raises, mirroring the smallness hypothesis of
the underlying local theory.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._kernels import cubic_inplace, spread_mult, weighted_reduce
from .grid import Field2D, GridSpec, fft2, ifft2, mass
from .nonlinearity import QuadratureRule, _averaged_cubic_raw, gauss_legendre_01

__all__ = [
    "SolverParams",
    "Trace",
    "SolverInstabilityError",
    "PicardNonContraction",
    "solve_nls",
    "solve_dmnls",
    "picard_short_time",
]

METHODS = ("interaction_rk4", "strang_nls_only")
MASS_DRIFT_LIMIT = 1e-6


class SolverInstabilityError(RuntimeError):
    """A run went non-finite or leaked mass beyond the configured limit."""

    def __init__(self, message: str, time: float, drift: float):
        self.time = time
        self.drift = drift
        super().__init__(message)


class PicardNonContraction(RuntimeError):
    """Fixed-point sweeps failed to contract; horizon or data too large.

    Carries the successive-iterate distances so callers can report them.
    """

    def __init__(self, distances: list[float], message: str):
        self.distances = distances
        super().__init__(message)


@dataclass(frozen=True)
class SolverParams:
    """Step size, horizon, quadrature size, snapshot cadence, and method."""

    dt: float
    t_final: float
    quad_nodes: int = 8
    snapshot_stride: int = 1
    method: str = "interaction_rk4"

    def __post_init__(self):
        if self.dt <= 0 or self.t_final <= 0:
            raise ValueError("dt and t_final must be positive")
        if self.dt > self.t_final:
            raise ValueError("dt must not exceed t_final")
        if self.snapshot_stride < 1:
            raise ValueError("snapshot_stride must be >= 1")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.quad_nodes < 1:
            raise ValueError("quad_nodes must be >= 1")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.t_final / self.dt)))


@dataclass(frozen=True)
class Trace:
    """Time-stamped trajectory of field snapshots from one run."""

    times: np.ndarray
    snapshots: list[Field2D]
    grid: GridSpec
    equation_tag: str

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if len(self.snapshots) != t.size or t.size == 0:
            raise ValueError("times and snapshots must match and be nonempty")
        if t[0] != 0.0 or np.any(np.diff(t) <= 0):
            raise ValueError("times must start at 0 and increase strictly")
        for s in self.snapshots:
            if s.grid != self.grid:
                raise ValueError("snapshot grid mismatch")
        object.__setattr__(self, "times", t)

    @property
    def window(self) -> tuple[float, float]:
        return float(self.times[0]), float(self.times[-1])

    @cached_property
    def mass_drift(self) -> float:
        """Max relative deviation of snapshot mass from the initial mass."""
        masses = np.array([mass(s) for s in self.snapshots])
        if masses[0] == 0.0:
            return float(np.max(masses))
        return float(np.max(np.abs(masses - masses[0])) / masses[0])


def _freeze(values: np.ndarray, grid: GridSpec) -> Field2D:
    values = np.ascontiguousarray(values)
    values.flags.writeable = False
    return Field2D(grid, values)


def _rk4_interaction(
    phi: Field2D,
    params: SolverParams,
    rule: QuadratureRule,
    tag: str,
    mass_tol: float = MASS_DRIFT_LIMIT,
) -> Trace:
    grid = phi.grid
    k2 = grid.k2
    h = params.t_final / params.n_steps
    n_steps = params.n_steps

    e_half = np.exp(-0.5j * h * k2)
    e_full = e_half * e_half

    sig = np.asarray(rule.nodes)[:, None, None]
    wts = np.asarray(rule.weights)[:, None, None]
    p0 = np.exp(-1j * sig * k2[None, :, :])
    ph = p0 * e_half[None, :, :]
    pf = p0 * e_full[None, :, :]
    # Weight-fused conjugate multipliers for the einsum reduction below.
    c0, ch, cf = (wts * np.conj(p) for p in (p0, ph, pf))
    # Plain NLS is the single node sigma = 0; its tau = 0 stage needs no FFTs.
    plain_k1 = rule.nodes == (0.0,)

    n = grid.n
    m_nodes = len(rule.nodes)
    spread_buf = np.empty((m_nodes, n, n), dtype=np.complex128)
    acc_buf = np.empty((n, n), dtype=np.complex128)

    def stage(p, cw, w):
        wh = fft2(w)
        if m_nodes == 1:
            psi = ifft2(p[0] * wh)
            cubic_inplace(psi)
            return -1j * ifft2(cw[0] * fft2(psi))
        spread_mult(p, wh, spread_buf)
        psi = ifft2(spread_buf)
        cubic_inplace(psi)
        weighted_reduce(cw, fft2(psi), acc_buf)
        return -1j * ifft2(acc_buf)

    u = phi.values.copy()
    mass0 = mass(phi)
    times = [0.0]
    snaps = [_freeze(u.copy(), grid)]

    for step in range(1, n_steps + 1):
        if plain_k1:
            k1 = -1j * (u.real**2 + u.imag**2) * u
        else:
            k1 = stage(p0, c0, u)
        k2s = stage(ph, ch, u + (0.5 * h) * k1)
        k3s = stage(ph, ch, u + (0.5 * h) * k2s)
        k4s = stage(pf, cf, u + h * k3s)
        w_end = u + (h / 6.0) * (k1 + 2.0 * (k2s + k3s) + k4s)
        u = ifft2(e_full * fft2(w_end))

        if step % params.snapshot_stride == 0 or step == n_steps:
            t = step * h
            if not np.isfinite(u).all():
                raise SolverInstabilityError(
                    f"{tag} run went non-finite at t = {t:.6g}", t, np.inf
                )
            m = mass(Field2D(grid, u))
            drift = abs(m - mass0) / mass0 if mass0 > 0 else m
            if drift > mass_tol:
                raise SolverInstabilityError(
                    f"{tag} run mass drift {drift:.3e} at t = {t:.6g} "
                    f"exceeds {mass_tol:.1e}",
                    t,
                    drift,
                )
            times.append(t)
            snaps.append(_freeze(u.copy(), grid))

    return Trace(np.array(times), snaps, grid, tag)


def _strang_nls(phi: Field2D, params: SolverParams) -> Trace:
    grid = phi.grid
    h = params.t_final / params.n_steps
    e_full = np.exp(-1j * h * grid.k2)
    u = phi.values.copy()
    times = [0.0]
    snaps = [_freeze(u.copy(), grid)]
    for step in range(1, params.n_steps + 1):
        u = u * np.exp(-0.5j * h * (u.real**2 + u.imag**2))
        u = ifft2(e_full * fft2(u))
        u = u * np.exp(-0.5j * h * (u.real**2 + u.imag**2))
        if step % params.snapshot_stride == 0 or step == params.n_steps:
            times.append(step * h)
            snaps.append(_freeze(u.copy(), grid))
    return Trace(np.array(times), snaps, grid, "nls")


def solve_nls(phi: Field2D, params: SolverParams) -> Trace:
    """Integrate i u_t + Lap u = |u|^2 u from phi over [0, t_final]."""
    if params.method == "strang_nls_only":
        return _strang_nls(phi, params)
    rule = QuadratureRule((0.0,), (1.0,), degree=1)
    return _rk4_interaction(phi, params, rule, "nls")


def solve_dmnls(
    phi: Field2D, params: SolverParams, rule: QuadratureRule | None = None
) -> Trace:
    """Integrate i v_t + Lap v = F_DM(v) from phi over [0, t_final]."""
    if params.method != "interaction_rk4":
        raise ValueError("dispersion-managed runs require method='interaction_rk4'")
    if rule is None:
        rule = gauss_legendre_01(params.quad_nodes)
    return _rk4_interaction(phi, params, rule, "dmnls")


def picard_short_time(
    phi: Field2D,
    t_final: float,
    rule: QuadratureRule,
    tol: float = 1e-10,
    max_iter: int = 8,
    time_points: int = 65,
) -> Trace:
    """Short-time fixed point of the mild dispersion-managed equation.

    Iterates u -> e^{i t Lap} phi - i * integral_0^t e^{i(t-s) Lap} F_DM(u(s)) ds
    on `time_points` stored times, with the Duhamel integral by cumulative
    trapezoid.  Each sweep must at least halve the successive-iterate distance
    (sup over stored times of the L2 difference); otherwise the data or the
    horizon is too large for the contraction and PicardNonContraction is
    raised with the distance history.
    """
    if t_final <= 0:
        raise ValueError("t_final must be positive")
    if time_points < 2:
        raise ValueError("need at least two stored times")
    grid = phi.grid
    k2 = grid.k2
    times = np.linspace(0.0, t_final, time_points)
    dt = times[1] - times[0]
    cell = grid.cell_area

    phih = fft2(phi.values)
    prop = np.exp(-1j * times[:, None, None] * k2[None, :, :])  # e^{i t Lap}
    free = ifft2(prop * phih[None, :, :])

    u = free.copy()
    distances: list[float] = []
    for sweep in range(1, max_iter + 1):
        if not np.isfinite(u).all():
            raise PicardNonContraction(
                distances, "iterates went non-finite; no contraction at this size"
            )
        gh = np.empty_like(u)
        for j in range(time_points):
            g = _averaged_cubic_raw(u[j], grid, rule)
            gh[j] = np.conj(prop[j]) * fft2(g)  # e^{-i s Lap} in Fourier
        integral = np.empty_like(gh)
        integral[0] = 0.0
        for j in range(1, time_points):
            integral[j] = integral[j - 1] + (0.5 * dt) * (gh[j - 1] + gh[j])
        u_next = ifft2(prop * (phih[None, :, :] - 1j * integral))

        diff = u_next - u
        dist = float(
            np.sqrt(cell * np.max(np.sum(diff.real**2 + diff.imag**2, axis=(1, 2))))
        )
        distances.append(dist)
        u = u_next
        if dist <= tol:
            snaps = [_freeze(u[j].copy(), grid) for j in range(time_points)]
            return Trace(times, snaps, grid, "dmnls")
        if len(distances) >= 2 and dist > 0.5 * distances[-2]:
            raise PicardNonContraction(
                distances,
                f"sweep {sweep} contracted by {distances[-2] / dist:.2f} < 2; "
                "data or horizon too large",
            )
    raise PicardNonContraction(
        distances, f"no convergence to {tol:.1e} within {max_iter} sweeps"
    )
