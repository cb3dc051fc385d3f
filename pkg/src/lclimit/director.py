"""Director update shared by the compressible and incompressible solvers.

One substep of length ``h`` is a composition of

1. rotation ``d <- exp(h Omega) d`` (pointwise orthogonal, keeps |d|),
2. explicit first-order upwind transport ``d <- d - h (u . grad) d``,
3. relaxation ``(I - h lam lap_h) d_new = d - h lam f(d)`` with the
   five-point Laplacian ``lap_h``.

Every substep is a rotation or a convex combination of nodal vectors
(upwinding under its CFL bound, the M-matrix resolvent, the pointwise
force shrink when ``2 h lam / zeta^2 <= 1/2``), so ``max |d|`` cannot grow.
That is why the substep count is raised automatically when the velocity
would break the upwind bound.

The co-rotational rate returned is ``N = lam (lap d_new - f(d))``, the
quantity the relaxation substep actually realized; it feeds the stress and
the dissipation count.  Walls of a bounded grid keep their initial values.
"""
from __future__ import annotations

import numpy as np

from .fields import Grid, Params, force_a, vorticity_a
from .sparse_ops import bounded_ops


def rotate(d: np.ndarray, omega: np.ndarray, h: float) -> np.ndarray:
    """Apply ``exp(h * Omega)`` pointwise; Omega is skew so this is a rotation."""
    if d.shape[0] == 1:
        return d.copy()
    ang = h * omega[1, 0]
    c, s = np.cos(ang), np.sin(ang)
    return np.stack([c * d[0] - s * d[1], s * d[0] + c * d[1]])


def fd_laplacian_symbol(grid: Grid) -> np.ndarray:
    """rfft symbol of the periodic five-point (three-point in 1D) Laplacian."""
    return -sum((4.0 / h ** 2) * np.sin(k * h / 2) ** 2
                for k, h in zip(grid.rfft_wavenumbers, grid.spacing))


def upwind_advection(grid: Grid, d: np.ndarray, u: np.ndarray) -> np.ndarray:
    """First-order upwind ``(u . grad) d`` (one-sided, zero flux through walls)."""
    out = np.zeros_like(d)
    for j in range(grid.dim):
        h = grid.spacing[j]
        ax = 1 + j
        if grid.periodic:
            fwd = (np.roll(d, -1, axis=ax) - d) / h
            bwd = (d - np.roll(d, 1, axis=ax)) / h
        else:
            fwd = np.zeros_like(d)
            bwd = np.zeros_like(d)
            sl = [slice(None)] * d.ndim
            lo, hi = list(sl), list(sl)
            lo[ax], hi[ax] = slice(0, -1), slice(1, None)
            diff = (d[tuple(hi)] - d[tuple(lo)]) / h
            fwd[tuple(lo)] = diff
            bwd[tuple(hi)] = diff
        uj = u[j]
        out += np.where(uj > 0, uj * bwd, uj * fwd)
    return out


def upwind_substeps(grid: Grid, u: np.ndarray, dt: float, requested: int = 1) -> int:
    courant = dt * sum(np.max(np.abs(u[j])) / h for j, h in enumerate(grid.spacing))
    return max(int(requested), int(np.ceil(courant / 0.9)))


def _relax(grid: Grid, rhs: np.ndarray, c: float, d_wall: np.ndarray) -> np.ndarray:
    if grid.periodic:
        sym = 1.0 / (1.0 - c * fd_laplacian_symbol(grid))
        return np.stack([grid.irfftn(sym * grid.rfftn(r)) for r in rhs])
    ops = bounded_ops(grid)
    solve = ops.dirichlet_solver(c)
    out = np.empty_like(rhs)
    for i in range(rhs.shape[0]):
        r = ops.to_int(rhs[i]) + c * ops.lap_boundary_contribution(d_wall[i])
        full = np.where(ops.interior, 0.0, d_wall[i])
        full[ops.interior] = solve(r)
        out[i] = full
    return out


def director_stage(grid: Grid, d: np.ndarray, u: np.ndarray, p: Params,
                   dt: float, substeps: int = 1):
    """Advance d over ``dt``; return ``(d_new, N_mean, dissipation)``.

    ``dissipation`` is ``sum_s h (alpha/lam) ||N_s||^2`` over the substeps.
    The substep count is raised as needed for the upwind bound and for
    ``2 h lam / zeta^2 <= 1/2``.
    """
    substeps = upwind_substeps(grid, u, dt, substeps)
    substeps = max(substeps, int(np.ceil(4.0 * p.lam * dt / p.zeta ** 2 - 1e-12)))
    h = dt / substeps
    omega = vorticity_a(grid, u)
    d_wall = d.copy()
    N_sum = np.zeros_like(d)
    diss = 0.0
    for _ in range(substeps):
        d1 = rotate(d, omega, h)
        d2 = d1 - h * upwind_advection(grid, d1, u)
        if not grid.periodic:
            d2[:, grid.boundary_mask] = d_wall[:, grid.boundary_mask]
        f = force_a(d2, p.zeta)
        d_new = _relax(grid, d2 - h * p.lam * f, h * p.lam, d_wall)
        N = (d_new - d2) / h
        if not grid.periodic:
            N[:, grid.boundary_mask] = 0.0
        N_sum += N
        diss += h * (p.alpha / p.lam) * grid.l2(N) ** 2
        d = d_new
    return d, N_sum / substeps, diss
