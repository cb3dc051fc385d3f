"""IMEX time stepping for the scaled compressible liquid-crystal system.

Unknowns are the density and the momentum ``m = rho u``.  Each step first
advances the director (see :mod:`lclimit.director`), then solves

    X^{n+1} - theta dt L X^{n+1} = X^n + dt (F(X^n) - theta L X^n)

where ``F`` is the full right-hand side and ``L`` its stiff part frozen
about the mean density ``rb``::

    L(rho, m) = (-div m,  -(Bb/eps^2) grad rho + (mu/rb) lap m + (xi/rb) grad div m),
    Bb = a gamma rb^(gamma-1).

The mass equation is linear, so its explicit and implicit parts cancel
and mass is conserved to rounding.  ``L`` has constant coefficients: on
the torus the implicit solve is a 2x2 problem per Fourier mode, on the
rectangle a sparse LU of the momentum Schur complement, cached per
coefficient set.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .director import director_stage
from .errors import SolverError
from .fields import Grid, Params, State, stress_a
from .helmholtz import PoissonContext
from .sparse_ops import bounded_ops
from .trajectory import COLUMNS, SchemeConfig, Trajectory, diagnostics_row


# -- discrete linear operators ------------------------------------------------------

class _PeriodicOps:
    """Spectral operators; first derivatives drop the Nyquist mode."""

    def __init__(self, grid: Grid):
        self.grid = grid
        self.ik = grid.rfft_derivative_symbols
        self.k2 = grid.rfft_k2
        self.ke2 = sum(-(s ** 2).real for s in self.ik)

    def div(self, m):
        g = self.grid
        return g.irfftn(sum(s * g.rfftn(m[i]) for i, s in enumerate(self.ik)))

    def grad(self, f):
        g = self.grid
        fh = g.rfftn(f)
        return np.stack([g.irfftn(s * fh) for s in self.ik])

    def lap(self, v):
        return np.stack([self.grid.lap_a(c) for c in v])

    def graddiv(self, v):
        return self.grad(self.div(v))

    def solve(self, r_rho, r_m, c, beta, nu, chi):
        g = self.grid
        rh = g.rfftn(r_rho)
        sh = [g.rfftn(x) for x in r_m]
        ik, k2, ke2 = self.ik, self.k2, self.ke2
        a_m = 1.0 + c * nu * k2
        a1 = a_m + c * chi * ke2
        q = (sum(s * x for s, x in zip(ik, sh)) + c * beta * ke2 * rh) / (a1 + c * c * beta * ke2)
        rho_h = rh - c * q
        m_h = [(x + c * chi * q * s - c * beta * s * rho_h) / a_m for s, x in zip(ik, sh)]
        return g.irfftn(rho_h), np.stack([g.irfftn(x) for x in m_h])


@lru_cache(maxsize=8)
def _bounded_factor(grid: Grid, c: float, beta: float, nu: float, chi: float):
    """LU of the momentum Schur complement.

    Eliminating ``rho = r_rho - c div m`` leaves
    ``(I - c nu lap) m - c (c beta + chi) grad div m = r_m - c beta grad r_rho``
    on interior nodes; a minimum-degree ordering keeps the fill moderate.
    """
    ops = bounded_ops(grid)
    dim = grid.dim
    K = c * (c * beta + chi)
    I_i = sp.identity(ops.n_int, format="csr")
    blocks = [[None] * dim for _ in range(dim)]
    for a in range(dim):
        for b in range(dim):
            blk = -K * (ops.G[a] @ ops.D[b])
            if a == b:
                blk = blk + I_i - c * nu * ops.lap_int
            blocks[a][b] = blk
    S = sp.bmat(blocks, format="csc")
    return spla.splu(S, permc_spec="MMD_AT_PLUS_A")


class _BoundedOps:
    """Finite-difference operators with momentum pinned to zero on the walls."""

    def __init__(self, grid: Grid):
        self.grid = grid
        self.ops = bounded_ops(grid)

    def _int(self, v):
        return [self.ops.to_int(c) for c in v]

    def _full(self, vs):
        return np.stack([self.ops.from_int(x) for x in vs])

    def div(self, m):
        mi = self._int(m)
        return sum(D @ x for D, x in zip(self.ops.D, mi)).reshape(self.grid.shape)

    def grad(self, f):
        fr = np.asarray(f).ravel()
        return self._full([G @ fr for G in self.ops.G])

    def lap(self, v):
        return self._full([self.ops.lap_int @ x for x in self._int(v)])

    def graddiv(self, v):
        return self.grad(self.div(v))

    def solve(self, r_rho, r_m, c, beta, nu, chi):
        lu = _bounded_factor(self.grid, float(c), float(beta), float(nu), float(chi))
        rr = np.asarray(r_rho).ravel()
        rhs = np.concatenate([x - c * beta * (G @ rr) for x, G in zip(self._int(r_m), self.ops.G)])
        x = lu.solve(rhs)
        if not np.all(np.isfinite(x)):
            raise SolverError("implicit acoustic solve returned non-finite values")
        ni = self.ops.n_int
        ms = [x[a * ni:(a + 1) * ni] for a in range(self.grid.dim)]
        rho = rr - c * sum(D @ m for D, m in zip(self.ops.D, ms))
        return rho.reshape(self.grid.shape), self._full(ms)


def linear_ops(grid: Grid):
    return _PeriodicOps(grid) if grid.periodic else _BoundedOps(grid)


# -- one step -----------------------------------------------------------------------

def _momentum_rhs(ops, grid, rho, m, u, d, N, p: Params):
    """Full momentum right-hand side ``F_m`` with the director terms at the new level."""
    mu_ = np.einsum("i...,j...->ij...", m, u)
    T = stress_a(grid, d, N, p)
    explicit = grid.div_tensor_a(p.alpha * T - mu_)
    if not grid.periodic:
        explicit = np.where(grid.boundary_mask, 0.0, explicit)
    return (explicit + p.mu * ops.lap(u) + p.xi * ops.graddiv(u)
            - ops.grad(p.pressure(rho)) / p.eps ** 2)


def advance(state: State, p: Params, cfg: SchemeConfig, ops=None):
    """One step; returns ``(new_state, dissipation_increment)``."""
    grid = state.grid
    ops = ops or linear_ops(grid)
    dt, th = cfg.dt, cfg.imex_theta
    rho, u, d = state.rho.values, state.u.values, state.d.values
    m = rho * u

    d_new, N, diss_d = director_stage(grid, d, u, p, dt, cfg.director_substeps)

    rb = grid.mean(rho)
    Bb = p.a * p.gamma * rb ** (p.gamma - 1.0)
    beta, nu, chi = Bb / p.eps ** 2, p.mu / rb, p.xi / rb

    F_m = _momentum_rhs(ops, grid, rho, m, u, d_new, N, p)
    L_m = -beta * ops.grad(rho) + nu * ops.lap(m) + chi * ops.graddiv(m)
    div_m = ops.div(m)
    # mass: F_rho = L_rho = -div m
    r_rho = rho - dt * (1.0 - th) * div_m
    r_m = m + dt * (F_m - th * L_m)
    rho_new, m_new = ops.solve(r_rho, r_m, th * dt, beta, nu, chi)

    if not (np.all(np.isfinite(rho_new)) and np.all(np.isfinite(m_new))):
        raise SolverError("non-finite values after the momentum stage", state.t + dt)
    rmin = float(np.min(rho_new))
    if rmin < -1e-12:
        raise SolverError(f"negative density {rmin:.3e}", state.t + dt)
    if rmin <= 0:
        raise SolverError("density reached vacuum, which the solver does not model", state.t + dt)
    u_new = m_new / rho_new
    if not grid.periodic:
        u_new[:, grid.boundary_mask] = 0.0

    u_th = th * u_new + (1.0 - th) * u
    Gu = grid.grad_vector_a(u_th)
    dens = p.mu * np.sum(Gu ** 2, axis=(0, 1)) + p.xi * np.einsum("ii...->...", Gu) ** 2
    diss = dt * grid.integrate(dens) + diss_d
    new = State.from_arrays(grid, state.t + dt, rho_new, u_new, d_new)
    return new, diss


def step(state: State, p: Params, cfg: SchemeConfig) -> State:
    """Advance ``state`` by one step of length ``cfg.dt``."""
    return advance(state, p, cfg)[0]


def run(initial: State, p: Params, cfg: SchemeConfig, stepper=advance,
        columns=COLUMNS, incompressible: bool = False) -> Trajectory:
    """Integrate to ``cfg.t_end``; failures are re-raised with the failing time."""
    grid = initial.grid
    cfg.check(grid, initial.u.values)
    ctx = PoissonContext(grid)
    ops = linear_ops(grid)
    traj = Trajectory(columns=columns)
    traj.append_state(initial)
    diss = 0.0
    traj.rows.append(diagnostics_row(initial, p, diss, ctx, incompressible))
    state = initial
    n = cfg.n_steps
    for k in range(1, n + 1):
        if cfg.dt > cfg.advective_limit(grid, state.u.values):
            raise SolverError("advective step limit violated", state.t)
        try:
            state, dd = stepper(state, p, cfg, ops)
        except SolverError:
            raise
        except (ValueError, FloatingPointError, np.linalg.LinAlgError, RuntimeError) as exc:
            raise SolverError(f"step failed: {exc}", state.t + cfg.dt) from exc
        diss += dd
        traj.rows.append(diagnostics_row(state, p, diss, ctx, incompressible))
        if k % cfg.output_every == 0 or k == n:
            traj.append_state(state)
    return traj


# -- initial data -----------------------------------------------------------------------

def _random_smooth(grid: Grid, rng: np.random.Generator, kmax: int = 3) -> np.ndarray:
    """Random trigonometric (torus) or cosine (rectangle) sum of low modes."""
    f = np.zeros(grid.shape)
    modes = np.stack(np.meshgrid(*[np.arange(kmax + 1)] * grid.dim, indexing="ij"), -1)
    modes = modes.reshape(-1, grid.dim)
    for kv in modes:
        if not kv.any():
            continue
        amp = rng.standard_normal() / (1.0 + float(kv @ kv))
        if grid.periodic:
            arg = sum(2 * np.pi * k * x / L for k, x, L in zip(kv, grid.coords, grid.extent))
            f += amp * np.cos(arg + rng.uniform(0, 2 * np.pi))
        else:
            term = np.ones(grid.shape)
            for k, x, L in zip(kv, grid.coords, grid.extent):
                term = term * np.cos(np.pi * k * x / L)
            f += amp * term
    return f


def well_prepared_initial(grid: Grid, p: Params, seed: int = 0) -> State:
    """Well-prepared data ``rho0 = 1 + eps phi0``, smooth ``u0``, unit ``d0``.

    ``phi0`` has zero mean and sup norm 1/2.  ``u0`` mixes a solenoidal
    part (curl of a stream function) with a gradient part of comparable
    size.  On a rectangle both are multiplied by a bubble that vanishes on
    the walls.  Everything except ``rho0`` is independent of ``eps``.
    """
    rng = np.random.default_rng(seed)
    phi = _random_smooth(grid, rng)
    phi -= grid.mean(phi)
    phi *= 0.5 / np.max(np.abs(phi))
    rho = 1.0 + p.eps * phi

    psi = _random_smooth(grid, rng)
    pot = _random_smooth(grid, rng)
    if grid.dim == 2:
        u = np.stack([grid.d(psi, 1), -grid.d(psi, 0)]) + grid.grad_a(pot)
    else:
        u = grid.grad_a(pot)
    if not grid.periodic:
        bubble = np.ones(grid.shape)
        for x, L in zip(grid.coords, grid.extent):
            bubble = bubble * np.sin(np.pi * x / L) ** 2
        u = u * bubble
        u[:, grid.boundary_mask] = 0.0
    u *= 0.5 / max(np.max(np.abs(u)), 1e-300)

    if grid.dim == 2:
        theta = _random_smooth(grid, rng, kmax=2)
        d = np.stack([np.cos(theta), np.sin(theta)])
    else:
        d = np.ones((1,) + grid.shape)
    return State.from_arrays(grid, 0.0, rho, u, d)
