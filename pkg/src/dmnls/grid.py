"""Periodic spectral grid, free Schrodinger propagator, and frequency projections.

Everything lives on the square torus [-L/2, L/2)^2 sampled at n points per
dimension.  The Fourier modes per dimension are {2*pi*j/L : j = -n/2..n/2-1},
so the free propagator e^{i*theta*Laplacian}, spectral derivatives, and
Littlewood-Paley cutoffs are exact diagonal multipliers.  Forward transforms
are unnormalized; the inverse carries the 1/n^2 factor, and every multiplier
is applied between one forward/inverse pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
from scipy import fft as _sfft

__all__ = [
    "GridSpec",
    "Field2D",
    "TailMonitorError",
    "make_grid",
    "fft2",
    "ifft2",
    "free_propagate",
    "low_pass_multiplier",
    "project_low",
    "project_high",
    "gradient",
    "laplacian",
    "mass",
    "inner",
    "lp_norm",
    "spectral_tail_fraction",
    "boundary_mass_fraction",
    "plane_wave",
    "gaussian_field",
    "band_limited_field",
]


def fft2(a: np.ndarray) -> np.ndarray:
    """Unnormalized forward FFT over the last two axes (batch-friendly)."""
    return _sfft.fft2(a, axes=(-2, -1), workers=2 if a.ndim > 2 else 1)


def ifft2(a: np.ndarray) -> np.ndarray:
    """Inverse FFT over the last two axes; carries the 1/n^2 normalization."""
    return _sfft.ifft2(a, axes=(-2, -1), workers=2 if a.ndim > 2 else 1)


class TailMonitorError(RuntimeError):
    """Raised when a field has too much spectral mass near the Nyquist modes."""

    def __init__(self, fraction: float, threshold: float):
        self.fraction = fraction
        self.threshold = threshold
        super().__init__(
            f"spectral tail fraction {fraction:.3e} exceeds threshold {threshold:.3e}"
        )


@dataclass(frozen=True)
class GridSpec:
    """Square periodic box [-L/2, L/2)^2 with n points (a power of two) per side.

    Attributes
    ----------
    box_length : float
        Side length L of the torus.
    points_per_dim : int
        Number of samples n per dimension; power of two, n >= 8.
    """

    box_length: float
    points_per_dim: int

    def __post_init__(self):
        n = self.points_per_dim
        if self.box_length <= 0:
            raise ValueError(f"box_length must be positive, got {self.box_length}")
        if n < 8 or (n & (n - 1)) != 0:
            raise ValueError(f"points_per_dim must be a power of two >= 8, got {n}")

    @property
    def n(self) -> int:
        return self.points_per_dim

    @property
    def cell_area(self) -> float:
        return (self.box_length / self.n) ** 2

    @property
    def mode_spacing(self) -> float:
        return 2 * np.pi / self.box_length

    @property
    def nyquist(self) -> float:
        """Largest mode magnitude per dimension, pi*n/L."""
        return np.pi * self.n / self.box_length

    @cached_property
    def x1(self) -> np.ndarray:
        """First coordinate as an (n, n) array (row index varies x1)."""
        x = -self.box_length / 2 + (self.box_length / self.n) * np.arange(self.n)
        return np.broadcast_to(x[:, None], (self.n, self.n))

    @cached_property
    def x2(self) -> np.ndarray:
        x = -self.box_length / 2 + (self.box_length / self.n) * np.arange(self.n)
        return np.broadcast_to(x[None, :], (self.n, self.n))

    @cached_property
    def k1d(self) -> np.ndarray:
        """Mode values 2*pi*j/L in FFT order, j = 0..n/2-1, -n/2..-1."""
        return 2 * np.pi * np.fft.fftfreq(self.n, d=self.box_length / self.n)

    @cached_property
    def kx(self) -> np.ndarray:
        return np.broadcast_to(self.k1d[:, None], (self.n, self.n))

    @cached_property
    def ky(self) -> np.ndarray:
        return np.broadcast_to(self.k1d[None, :], (self.n, self.n))

    @cached_property
    def k2(self) -> np.ndarray:
        """|xi|^2 on the mode grid; the symbol of -Laplacian."""
        return self.kx**2 + self.ky**2


def make_grid(box_length: float, n: int) -> GridSpec:
    """Build a GridSpec, rejecting non-positive boxes and non-power-of-two n."""
    return GridSpec(float(box_length), int(n))


@dataclass(frozen=True)
class Field2D:
    """Complex grid function sampled in physical space on a GridSpec.

    Values are complex128 and treated as immutable snapshots; all operations
    below are pure functions returning new fields.
    """

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        n = self.grid.n
        if v.shape != (n, n):
            raise ValueError(f"values shape {v.shape} does not match grid {n}x{n}")
        if not np.isfinite(v).all():
            raise ValueError("field contains non-finite entries")
        object.__setattr__(self, "values", v)

    def __add__(self, other: "Field2D") -> "Field2D":
        _check_same_grid(self, other)
        return Field2D(self.grid, self.values + other.values)

    def __sub__(self, other: "Field2D") -> "Field2D":
        _check_same_grid(self, other)
        return Field2D(self.grid, self.values - other.values)

    def __mul__(self, scalar: complex) -> "Field2D":
        return Field2D(self.grid, self.values * scalar)

    __rmul__ = __mul__


def _check_same_grid(f: Field2D, g: Field2D) -> None:
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")


def free_propagate(f: Field2D, theta: float) -> Field2D:
    """Apply the free propagator e^{i*theta*Laplacian} (symbol e^{-i*theta*|xi|^2}).

    Exactly unitary in the discrete L2 inner product; theta = 0 is the identity
    and propagation composes additively in theta up to round-off.
    """
    if theta == 0.0:
        return f
    mult = np.exp(-1j * theta * f.grid.k2)
    return Field2D(f.grid, ifft2(mult * fft2(f.values)))


def _cosine_cutoff(r: np.ndarray) -> np.ndarray:
    """Smooth radial profile: 1 on [0, 1], cosine taper on [1, 2], 0 beyond."""
    out = np.ones_like(r)
    mid = (r > 1.0) & (r < 2.0)
    out[mid] = 0.5 * (1.0 + np.cos(np.pi * (r[mid] - 1.0)))
    out[r >= 2.0] = 0.0
    return out


def low_pass_multiplier(
    grid: GridSpec, N: float, profile: Callable[[np.ndarray], np.ndarray] | None = None
) -> np.ndarray:
    """Fourier-side multiplier chi(|xi|/N) for the low-frequency projection."""
    if N <= 0:
        raise ValueError(f"cutoff N must be positive, got {N}")
    chi = profile if profile is not None else _cosine_cutoff
    return chi(np.sqrt(grid.k2) / N)


def project_low(
    f: Field2D, N: float, profile: Callable[[np.ndarray], np.ndarray] | None = None
) -> Field2D:
    """Smooth projection onto modes |xi| <= N (transition region up to 2N)."""
    mult = low_pass_multiplier(f.grid, N, profile)
    return Field2D(f.grid, ifft2(mult * fft2(f.values)))


def project_high(
    f: Field2D, N: float, profile: Callable[[np.ndarray], np.ndarray] | None = None
) -> Field2D:
    """Complement of project_low; low + high recovers f exactly."""
    return Field2D(f.grid, f.values - project_low(f, N, profile).values)


def gradient(f: Field2D) -> tuple[Field2D, Field2D]:
    """Spectral gradient (i*xi_1, i*xi_2) applied on the Fourier side."""
    fh = fft2(f.values)
    gx = ifft2(1j * f.grid.kx * fh)
    gy = ifft2(1j * f.grid.ky * fh)
    return Field2D(f.grid, gx), Field2D(f.grid, gy)


def laplacian(f: Field2D) -> Field2D:
    """Spectral Laplacian, multiplier -|xi|^2."""
    return Field2D(f.grid, ifft2(-f.grid.k2 * fft2(f.values)))


def mass(f: Field2D) -> float:
    """Discrete L2 norm sqrt(cell_area * sum |f|^2)."""
    v = f.values
    return float(np.sqrt(f.grid.cell_area * np.sum(v.real**2 + v.imag**2)))


def inner(f: Field2D, g: Field2D) -> complex:
    """Discrete L2 inner product cell_area * sum f * conj(g)."""
    _check_same_grid(f, g)
    return complex(f.grid.cell_area * np.sum(f.values * np.conj(g.values)))


def lp_norm(f: Field2D, p: float) -> float:
    """Discrete spatial L^p norm (cell_area * sum |f|^p)^(1/p)."""
    return float((f.grid.cell_area * np.sum(np.abs(f.values) ** p)) ** (1.0 / p))


def spectral_tail_fraction(f: Field2D, frac: float = 1.0 / 3.0) -> float:
    """Relative L2 amplitude at modes with max(|xi_1|, |xi_2|) > frac * Nyquist.

    Cubic products stay alias-free as long as this tail is negligible for
    frac = 1/3, which is what solvers and derivative-heavy operations monitor.
    """
    fh = fft2(f.values)
    power = fh.real**2 + fh.imag**2
    total = power.sum()
    if total == 0.0:
        return 0.0
    cut = frac * f.grid.nyquist
    tail = (np.abs(f.grid.kx) > cut) | (np.abs(f.grid.ky) > cut)
    return float(np.sqrt(power[tail].sum() / total))


def boundary_mass_fraction(f: Field2D, frame: float = 0.1) -> float:
    """Fraction of L2 mass in the outer `frame` annulus of the box.

    Monitors how honestly the periodic box stands in for the plane: solutions
    should keep this below ~1e-8 over a run.
    """
    half = f.grid.box_length / 2
    ring = np.maximum(np.abs(f.grid.x1), np.abs(f.grid.x2)) >= (1.0 - frame) * half
    v2 = f.values.real**2 + f.values.imag**2
    total = v2.sum()
    if total == 0.0:
        return 0.0
    return float(np.sqrt(v2[ring].sum() / total))


def plane_wave(grid: GridSpec, mode: tuple[int, int], amplitude: complex = 1.0) -> Field2D:
    """Single Fourier mode amplitude * e^{i k.x} with k = 2*pi*mode/L."""
    k1 = grid.mode_spacing * mode[0]
    k2 = grid.mode_spacing * mode[1]
    return Field2D(grid, amplitude * np.exp(1j * (k1 * grid.x1 + k2 * grid.x2)))


def gaussian_field(grid: GridSpec, width: float = 1.0, amplitude: complex = 1.0) -> Field2D:
    """Centered Gaussian amplitude * e^{-|x|^2 / (2 width^2)}."""
    r2 = grid.x1**2 + grid.x2**2
    return Field2D(grid, amplitude * np.exp(-r2 / (2.0 * width**2)))


def band_limited_field(
    grid: GridSpec,
    max_mode: int,
    rng: np.random.Generator,
    norm: float = 1.0,
) -> Field2D:
    """Random field supported on integer modes |j|_inf <= max_mode, L2 norm `norm`.

    Coefficients are iid complex Gaussians; the result is deterministic given
    the generator state.
    """
    n = grid.n
    if max_mode >= n // 2:
        raise ValueError("max_mode must sit strictly inside the mode grid")
    fh = np.zeros((n, n), dtype=np.complex128)
    m = 2 * max_mode + 1
    block = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    idx = np.arange(-max_mode, max_mode + 1)
    fh[np.ix_(idx % n, idx % n)] = block
    f = Field2D(grid, ifft2(fh))
    scale = mass(f)
    if scale == 0.0:
        raise ValueError("degenerate random draw")
    return Field2D(grid, f.values * (norm / scale))
