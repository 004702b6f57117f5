"""Fourier pseudo-spectral operators, inner products and shifted solves.

Transforms normalize on the inverse. Even symbols (Laplacian, biharmonic)
keep the Nyquist mode; first-derivative symbols zero it so that outputs of
real inputs stay real.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np
import scipy.fft as fft

from savark.errors import SingularSolveError
from savark.spectral.grid import Grid2D, RealField, Symbol


SINGULAR_TOL = 1e-14


def forward(u: RealField) -> np.ndarray:
    return fft.fft2(u.values)


def inverse(coeffs: np.ndarray, grid: Grid2D) -> RealField:
    return RealField(grid, fft.ifft2(coeffs).real)


def apply_symbol(sigma: Symbol, u: RealField) -> RealField:
    return inverse(sigma.values * forward(u), u.grid)


def laplacian(u: RealField) -> RealField:
    return inverse(-u.grid.k2 * forward(u), u.grid)


def biharmonic(u: RealField) -> RealField:
    k2 = u.grid.k2
    return inverse(k2 * k2 * forward(u), u.grid)


def gradient(u: RealField) -> Tuple[RealField, RealField]:
    g = u.grid
    uh = forward(u)
    return (
        inverse(1j * g.kx_odd[:, None] * uh, g),
        inverse(1j * g.ky_odd[None, :] * uh, g),
    )


def divergence(px: RealField, py: RealField) -> RealField:
    g = px.grid
    px.require_same_grid(py)
    return inverse(1j * g.kx_odd[:, None] * forward(px) + 1j * g.ky_odd[None, :] * forward(py), g)


def inner(u: RealField, v: RealField) -> float:
    u.require_same_grid(v)
    g = u.grid
    return float(g.hx * g.hy * np.sum(u.values * v.values))


def integral(u: RealField) -> float:
    """(u, 1)_N."""
    g = u.grid
    return float(g.hx * g.hy * np.sum(u.values))


def norm_l2(u: RealField) -> float:
    return float(np.sqrt(inner(u, u)))


def norm_inf(u: RealField) -> float:
    return float(np.max(np.abs(u.values)))


def dealias_mask(grid: Grid2D) -> np.ndarray:
    """2/3-rule mask: keeps modes with |m| < N/3 in each direction."""
    mx = np.abs(np.fft.fftfreq(grid.nx, d=1.0 / grid.nx))
    my = np.abs(np.fft.fftfreq(grid.ny, d=1.0 / grid.ny))
    return (mx[:, None] < grid.nx / 3.0) & (my[None, :] < grid.ny / 3.0)


def dealias(u: RealField) -> RealField:
    return inverse(dealias_mask(u.grid) * forward(u), u.grid)


def _shift_denominator(sigma: Symbol, alpha: float) -> np.ndarray:
    denom = 1.0 - alpha * sigma.values
    worst = float(np.min(np.abs(denom)))
    if worst < SINGULAR_TOL:
        raise SingularSolveError(
            f"shifted operator is singular: min |1 - alpha*sigma| = {worst:.3e} (alpha={alpha:.6g})"
        )
    return denom


def solve_shifted(sigma: Symbol, alpha: float, r: RealField) -> RealField:
    """Solve (I - alpha*Sigma) w = r mode by mode."""
    if alpha == 0.0:
        return r.copy()
    denom = _shift_denominator(sigma, alpha)
    return inverse(forward(r) / denom, r.grid)


def solve_shifted_block(sigma: Symbol, alpha: np.ndarray, rhs: Sequence[RealField]) -> List[RealField]:
    """Solve the coupled system w_i - sum_j alpha_ij Sigma w_j = r_i for a stage block.

    alpha is m x m; per Fourier mode this is the dense system (I - sigma(k) alpha).
    """
    alpha = np.atleast_2d(np.asarray(alpha, dtype=float))
    m = alpha.shape[0]
    if m == 1:
        return [solve_shifted(sigma, float(alpha[0, 0]), rhs[0])]
    grid = rhs[0].grid
    if not np.any(alpha):
        return [r.copy() for r in rhs]
    mats = np.eye(m) - sigma.values[..., None, None] * alpha
    det = np.linalg.det(mats)
    worst = float(np.min(np.abs(det)))
    if worst < SINGULAR_TOL:
        raise SingularSolveError(f"stage block operator is singular: min |det| = {worst:.3e}")
    hats = np.stack([forward(r) for r in rhs], axis=-1)
    sol = np.linalg.solve(mats.astype(complex), hats[..., None])[..., 0]
    return [inverse(sol[..., i], grid) for i in range(m)]
