"""Computable multiplier norms and dense trilinear application.

The operator norm proxy for a Fourier multiplier m is the L^1 norm of
its inverse transform, here normalized as

    m_check(y) = (2 pi)^(-d) integral m(xi) exp(i y . xi) dxi,

so that ||T_m(f_1,...,f_d)||_p <= s_norm(m) ||f_1||_p1 ... ||f_d||_pd
holds with constant one for Hoelder exponents (discrete fields on a
shared grid included: the periodic kernel is exactly the Riemann sum
of m_check over the frequency lattice).  The norm is computed by
zero-padded FFT and Riemann quadrature in y; magnitudes are shift
invariant, so the sample ordering does not matter.

The dense trilinear application realizes

    F[T_m](xi) = (dxi^2 / 2 pi) sum_{xi1+xi2+xi3=xi} m c1 c2 c3

on the lattice, dropping out-of-lattice output frequencies (no alias
wrap), which matches the continuum convolution for band-limited data.
"""

from __future__ import annotations

import numpy as np

from whithamlab.errors import DomainError, MemoryBudgetError, NonDecayedEdgeError
from whithamlab.fields import SpectralField

__all__ = ["s_norm", "apply_trilinear"]


def s_norm(values: np.ndarray, spacing, pad: int = 4, edge_tol: float = 1e-8) -> float:
    """||m_check||_L1 for a multiplier sampled uniformly on a box.

    ``spacing`` is the sample spacing per axis (scalar or tuple).  The
    samples must decay at the box edge (max edge magnitude below
    edge_tol times the peak), otherwise the transform aliases and
    NonDecayedEdgeError is raised.
    """
    m = np.asarray(values, dtype=complex)
    d = m.ndim
    if d < 1 or d > 3:
        raise DomainError(f"s_norm supports 1 to 3 dimensions, got {d}")
    if pad < 4:
        raise DomainError(f"zero-padding factor {pad} below the required 4")
    spacings = np.broadcast_to(np.asarray(spacing, dtype=float), (d,))
    if np.any(spacings <= 0.0):
        raise DomainError("spacings must be positive")

    peak = float(np.max(np.abs(m)))
    if peak == 0.0:
        return 0.0
    edge = 0.0
    for axis in range(d):
        sl0 = [slice(None)] * d
        sl1 = [slice(None)] * d
        sl0[axis] = 0
        sl1[axis] = -1
        edge = max(edge, float(np.max(np.abs(m[tuple(sl0)]))),
                   float(np.max(np.abs(m[tuple(sl1)]))))
    if edge > edge_tol * peak:
        raise NonDecayedEdgeError(
            f"edge magnitude {edge:.3e} above {edge_tol:.1e} of peak {peak:.3e}"
        )

    shape = tuple(pad * s for s in m.shape)
    kernel = np.fft.fftn(m, s=shape)
    cell = np.prod([2.0 * np.pi / (pad * n * h) for n, h in zip(m.shape, spacings)])
    scale = np.prod(spacings) / (2.0 * np.pi) ** d
    return float(np.sum(np.abs(kernel)) * scale * cell)


def _signed_indices(n: int) -> np.ndarray:
    s = np.arange(n)
    return np.where(s < n // 2, s, s - n)


def apply_trilinear(m, f1: SpectralField, f2: SpectralField, f3: SpectralField,
                    memory_budget_bytes: int = 2 ** 28) -> SpectralField:
    """Dense trilinear multiplier application on a shared grid.

    ``m`` is either a vectorized callable m(xi1, xi2, xi3) or a complex
    array of shape (n, n, n) aligned with grid.xi (FFT order) on every
    axis.  Dense array storage beyond ``memory_budget_bytes`` raises
    MemoryBudgetError; the callable path evaluates slice by slice.
    Cost is O(n^2) per output frequency.
    """
    grid = f1.grid
    grid.checked_same(f2.grid)
    grid.checked_same(f3.grid)
    n = grid.n
    dense = not callable(m)
    if dense:
        m = np.asarray(m)
        if m.shape != (n, n, n):
            raise DomainError(f"dense multiplier shape {m.shape} != {(n, n, n)}")
        if m.nbytes > memory_budget_bytes:
            raise MemoryBudgetError(
                f"dense multiplier needs {m.nbytes} bytes > budget {memory_budget_bytes}"
            )

    s = _signed_indices(n)            # signed lattice index per position
    pos_of = np.argsort(s)            # signed index + n//2 -> array position
    xi1 = grid.xi[:, None]
    xi2 = grid.xi[None, :]
    c1 = f1.coefficients[:, None]
    c2 = f2.coefficients[None, :]
    s12 = s[:, None] + s[None, :]

    out = np.zeros(n, dtype=complex)
    norm = grid.dxi ** 2 / (2.0 * np.pi)
    for p_out in range(n):
        r = s[p_out] - s12
        valid = (r >= -(n // 2)) & (r <= n // 2 - 1)
        pr = pos_of[np.clip(r + n // 2, 0, n - 1)]
        c3 = np.where(valid, f3.coefficients[pr], 0.0)
        if dense:
            rows = np.arange(n)
            mv = np.where(valid, m[rows[:, None], rows[None, :], pr], 0.0)
        else:
            xi3 = np.where(valid, r * grid.dxi, 0.0)
            mv = np.where(valid, m(xi1, xi2, xi3), 0.0)
        out[p_out] = norm * np.sum(mv * c1 * c2 * c3)
    return SpectralField(grid, out)
