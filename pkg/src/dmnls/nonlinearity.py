"""Cubic nonlinearity, its average over the free flow, and the defect between them.

The dispersion-managed equation replaces the pointwise cubic F(psi) = |psi|^2 psi
by its average over one period of the fast free flow,

    F_DM(psi) = integral_0^1 e^{-i*sigma*Laplacian} F(e^{i*sigma*Laplacian} psi) d sigma,

evaluated here by Gauss-Legendre quadrature on [0, 1].  The integrand
H(tau) = e^{-i*tau*Laplacian} F(e^{i*tau*Laplacian} psi) is entire in tau for
band-limited fields, so the quadrature converges spectrally in the node count.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._kernels import cubic_inplace, spread_mult, weighted_reduce
from .grid import (
    Field2D,
    GridSpec,
    TailMonitorError,
    fft2,
    free_propagate,
    ifft2,
    spectral_tail_fraction,
)

__all__ = [
    "QuadratureRule",
    "gauss_legendre_01",
    "cubic",
    "dm_nonlinearity",
    "shifted_cubic",
    "dH_dtau",
    "defect",
]

TAIL_TOLERANCE = 1e-10


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for integrating over sigma in [0, 1].

    Weights must be positive and sum to 1 (the rule integrates constants
    exactly); `degree` is the highest polynomial degree integrated exactly.
    """

    nodes: tuple[float, ...]
    weights: tuple[float, ...]
    degree: int

    def __post_init__(self):
        nodes = np.asarray(self.nodes)
        weights = np.asarray(self.weights)
        if nodes.shape != weights.shape or nodes.ndim != 1 or nodes.size == 0:
            raise ValueError("nodes and weights must be matching nonempty 1-D sequences")
        if np.any(nodes < 0.0) or np.any(nodes > 1.0):
            raise ValueError("quadrature nodes must lie in [0, 1]")
        if np.any(weights <= 0.0):
            raise ValueError("quadrature weights must be positive")
        if abs(weights.sum() - 1.0) > 1e-14:
            raise ValueError(f"weights sum to {weights.sum()!r}, expected 1")


def gauss_legendre_01(m: int) -> QuadratureRule:
    """Gauss-Legendre rule with m nodes mapped from [-1, 1] to [0, 1]."""
    if m < 1:
        raise ValueError(f"node count must be >= 1, got {m}")
    x, w = np.polynomial.legendre.leggauss(m)
    nodes = 0.5 * (x + 1.0)
    weights = 0.5 * w
    weights = weights / weights.sum()
    return QuadratureRule(tuple(nodes), tuple(weights), degree=2 * m - 1)


def cubic(f: Field2D) -> Field2D:
    """Pointwise defocusing cubic |f|^2 f."""
    v = f.values
    return Field2D(f.grid, (v.real**2 + v.imag**2) * v)


@lru_cache(maxsize=16)
def _node_multipliers(grid: GridSpec, nodes: tuple[float, ...]) -> np.ndarray:
    """Stacked symbols e^{-i*sigma_m*|xi|^2} for the quadrature nodes."""
    sig = np.asarray(nodes)[:, None, None]
    return np.exp(-1j * sig * grid.k2[None, :, :])


def _averaged_cubic_raw(values: np.ndarray, grid: GridSpec, rule: QuadratureRule) -> np.ndarray:
    """Quadrature evaluation of F_DM on raw arrays; one batched FFT per direction."""
    mult = _node_multipliers(grid, rule.nodes)
    fh = fft2(values)
    psi = np.empty_like(mult)
    spread_mult(mult, fh, psi)
    psi = ifft2(psi)
    cubic_inplace(psi)
    w = np.asarray(rule.weights)[:, None, None]
    acc = np.empty_like(fh)
    weighted_reduce(w * np.conj(mult), fft2(psi), acc)
    return ifft2(acc)


def dm_nonlinearity(f: Field2D, rule: QuadratureRule) -> Field2D:
    """Dispersion-averaged cubic: weighted sum of e^{-i s D} F(e^{i s D} f) over nodes s."""
    return Field2D(f.grid, _averaged_cubic_raw(f.values, f.grid, rule))


def shifted_cubic(f: Field2D, tau: float) -> Field2D:
    """H(tau) = e^{-i*tau*Laplacian} F(e^{i*tau*Laplacian} f), the averaging integrand."""
    return free_propagate(cubic(free_propagate(f, tau)), -tau)


def dH_dtau(f: Field2D, tau: float, tail_tol: float = TAIL_TOLERANCE) -> Field2D:
    """Exact tau-derivative of the averaging integrand H(tau).

    With psi = e^{i*tau*Laplacian} f this evaluates

        -2i e^{-i*tau*Laplacian} [ conj(psi) (grad psi . grad psi)
                                   + 2 |grad psi|^2 psi
                                   + psi^2 Laplacian(conj(psi)) ],

    where grad psi . grad psi is the complex (unconjugated) square and
    |grad psi|^2 the conjugated one.  The two spectral derivatives amplify
    Nyquist-adjacent content, so inputs must pass the spectral tail monitor.
    """
    tail = spectral_tail_fraction(f)
    if tail > tail_tol:
        raise TailMonitorError(tail, tail_tol)
    grid = f.grid
    psih = np.exp(-1j * tau * grid.k2) * fft2(f.values) if tau != 0.0 else fft2(f.values)
    psi = ifft2(psih)
    px = ifft2(1j * grid.kx * psih)
    py = ifft2(1j * grid.ky * psih)
    lap = ifft2(-grid.k2 * psih)
    bracket = (
        np.conj(psi) * (px * px + py * py)
        + 2.0 * (px.real**2 + px.imag**2 + py.real**2 + py.imag**2) * psi
        + psi * psi * np.conj(lap)
    )
    out = -2j * fft2(bracket)
    if tau != 0.0:
        out = np.exp(1j * tau * grid.k2) * out
    return Field2D(grid, ifft2(out))


def defect(f: Field2D, rule: QuadratureRule) -> Field2D:
    """Residual F(f) - F_DM(f); how far f is from feeling the averaged nonlinearity."""
    return cubic(f) - dm_nonlinearity(f, rule)
