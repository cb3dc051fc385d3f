"""Projection-method solver for the incompressible limit system.

Per step: the shared director stage, then

    (I - theta dt mu lap) u* = u^n + dt ((1 - theta) mu lap u^n - div(u (x) u) + alpha div T),
    u^{n+1} = P u*,   pi = lap^-1 div u* / dt.

The density stays identically 1.
"""
from __future__ import annotations

import numpy as np

from .compressible import linear_ops, run
from .director import director_stage
from .errors import SolverError
from .fields import Grid, Params, State, stress_a
from .helmholtz import PoissonContext
from .sparse_ops import bounded_ops
from .trajectory import COLUMNS_INC, SchemeConfig, Trajectory

_CTX: dict = {}


def _ctx(grid: Grid) -> PoissonContext:
    key = (grid.extent, grid.points, grid.boundary)
    if key not in _CTX:
        _CTX[key] = PoissonContext(grid)
    return _CTX[key]


def _viscous_solve(grid: Grid, rhs: np.ndarray, c: float) -> np.ndarray:
    if grid.periodic:
        sym = 1.0 / (1.0 + c * grid.rfft_k2)
        return np.stack([grid.irfftn(sym * grid.rfftn(r)) for r in rhs])
    ops = bounded_ops(grid)
    solve = ops.dirichlet_solver(c)
    return np.stack([ops.from_int(solve(ops.to_int(r))) for r in rhs])


def advance_inc(state: State, p: Params, cfg: SchemeConfig, ops=None):
    """One projection step; returns ``(new_state, dissipation_increment)``.

    The multiplier ``pi`` of the last call is kept in ``advance_inc.last_pi``.
    """
    grid = state.grid
    ops = ops or linear_ops(grid)
    ctx = _ctx(grid)
    dt, th = cfg.dt, cfg.imex_theta
    u, d = state.u.values, state.d.values

    d_new, N, diss_d = director_stage(grid, d, u, p, dt, cfg.director_substeps)
    T = stress_a(grid, d_new, N, p)
    uu = np.einsum("i...,j...->ij...", u, u)
    expl = grid.div_tensor_a(p.alpha * T - uu)
    rhs = u + dt * ((1.0 - th) * p.mu * ops.lap(u) + expl)
    if not grid.periodic:
        rhs[:, grid.boundary_mask] = 0.0
    ustar = _viscous_solve(grid, rhs, th * dt * p.mu)
    u_new = ctx.project_P_a(ustar)
    advance_inc.last_pi = ctx.potential_a(ustar) / dt
    if not grid.periodic:
        u_new[:, grid.boundary_mask] = 0.0
    if not np.all(np.isfinite(u_new)):
        raise SolverError("non-finite velocity after projection", state.t + dt)

    u_th = th * u_new + (1.0 - th) * u
    Gu = grid.grad_vector_a(u_th)
    diss = dt * p.mu * grid.integrate(np.sum(Gu ** 2, axis=(0, 1))) + diss_d
    new = State.from_arrays(grid, state.t + dt, np.ones(grid.shape), u_new, d_new)
    return new, diss


advance_inc.last_pi = None


def step_inc(state: State, p: Params, cfg: SchemeConfig) -> State:
    return advance_inc(state, p, cfg)[0]


def limit_initial(state: State) -> State:
    """Limit-system data: density 1 and the solenoidal part ``P u0``."""
    g = state.grid
    u = _ctx(g).project_P_a(state.u.values)
    if not g.periodic:
        u[:, g.boundary_mask] = 0.0
    return State.from_arrays(g, state.t, np.ones(g.shape), u, state.d.values)


def run_inc(initial: State, p: Params, cfg: SchemeConfig) -> Trajectory:
    """Integrate the limit system from ``(1, P u0, d0)``."""
    return run(limit_initial(initial), p, cfg, stepper=advance_inc,
               columns=COLUMNS_INC, incompressible=True)
