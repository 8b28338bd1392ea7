"""Fused elementwise kernels for the solver inner loop.

The batched quadrature-node arrays are ~8 MB each at production size, so the
naive numpy expressions spend most of their time allocating and re-reading
temporaries.  These kernels are single-pass and parallel over grid cells;
every reduction runs in a fixed order per cell, so results are deterministic
run to run.
"""

from __future__ import annotations

import numba
import numpy as np

# The bundled TBB is too old for numba's TBB layer; pick the portable one
# explicitly so import does not warn.
numba.config.THREADING_LAYER = "workqueue"


@numba.njit(parallel=True, cache=True)
def spread_mult(p: np.ndarray, wh: np.ndarray, out: np.ndarray) -> None:
    """out[m, i] = p[m, i] * wh[i] over flattened cells i."""
    m = p.shape[0]
    nn = wh.size
    pf = p.reshape(m, nn)
    whf = wh.reshape(nn)
    of = out.reshape(m, nn)
    for i in numba.prange(nn):
        w = whf[i]
        for k in range(m):
            of[k, i] = pf[k, i] * w


@numba.njit(parallel=True, cache=True)
def cubic_inplace(psi: np.ndarray) -> None:
    """psi <- |psi|^2 psi, elementwise over any shape."""
    flat = psi.reshape(-1)
    for i in numba.prange(flat.size):
        z = flat[i]
        flat[i] = (z.real * z.real + z.imag * z.imag) * z


@numba.njit(parallel=True, cache=True)
def weighted_reduce(cw: np.ndarray, fh: np.ndarray, out: np.ndarray) -> None:
    """out[i] = sum_m cw[m, i] * fh[m, i]; the m-loop is sequential per cell."""
    m = cw.shape[0]
    nn = out.size
    cwf = cw.reshape(m, nn)
    fhf = fh.reshape(m, nn)
    of = out.reshape(nn)
    for i in numba.prange(nn):
        acc = 0.0j
        for k in range(m):
            acc += cwf[k, i] * fhf[k, i]
        of[i] = acc
