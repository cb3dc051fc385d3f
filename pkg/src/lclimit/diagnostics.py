"""Energy, density and velocity diagnostics used by the solvers and the sweep."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .fields import Grid, Params, State, potential_a
from .helmholtz import PoissonContext


@dataclass(frozen=True)
class EnergyReport:
    kinetic: float
    elastic: float
    potential: float
    pressure_dev: float
    dissipation_cum: float = 0.0

    @property
    def total(self) -> float:
        return self.kinetic + self.elastic + self.potential + self.pressure_dev

    @property
    def total_with_dissipation(self) -> float:
        return self.total + self.dissipation_cum


def forward_gradient_sq(grid: Grid, d: np.ndarray) -> np.ndarray:
    """Nodal ``sum_k |D+ d_k|^2`` built from forward differences.

    This is the Dirichlet energy whose variation is the five-point
    Laplacian used by the director relaxation, so the discrete energy law
    is measured with the same operator the scheme dissipates.  On bounded
    grids each edge is stored on its left node, and the first node's value
    is doubled to undo its half trapezoid weight, so ``integrate`` of the
    result is the plain edge sum.
    """
    out = np.zeros(grid.shape)
    for ax, h in enumerate(grid.spacing):
        a = 1 + ax
        if grid.periodic:
            diff = np.roll(d, -1, axis=a) - d
            out += np.sum(diff ** 2, axis=0) / h ** 2
        else:
            n = grid.points[ax]
            diff = np.diff(d, axis=a)
            sq = np.sum(diff ** 2, axis=0) / h ** 2
            pad = [(0, 0)] * grid.dim
            pad[ax] = (0, 1)
            sq = np.pad(sq, pad)
            wfix = np.ones(n)
            wfix[0] = 2.0
            shape = [1] * grid.dim
            shape[ax] = n
            out += sq * wfix.reshape(shape)
    return out


def pressure_density(rho, p: Params):
    """``a (rho^gamma - gamma (rho - 1) - 1) / (eps^2 (gamma - 1))`` pointwise."""
    rho = np.asarray(rho, dtype=float)
    return p.a * (rho ** p.gamma - p.gamma * (rho - 1.0) - 1.0) / (p.eps ** 2 * (p.gamma - 1.0))


def energy_arrays(grid: Grid, rho, u, d, p: Params, dissipation_cum: float = 0.0) -> EnergyReport:
    if np.min(rho) <= 0:
        raise ValueError("energy needs strictly positive density")
    kin = 0.5 * grid.integrate(rho * np.sum(np.asarray(u) ** 2, axis=0))
    ela = 0.5 * p.alpha * grid.integrate(forward_gradient_sq(grid, np.asarray(d)))
    pot = p.alpha * grid.integrate(potential_a(np.asarray(d), p.zeta))
    prs = grid.integrate(pressure_density(rho, p))
    return EnergyReport(kin, ela, pot, prs, float(dissipation_cum))


def energy(state: State, p: Params, dissipation_cum: float = 0.0) -> EnergyReport:
    """Scaled energy of ``state``; all components are grid quadratures."""
    return energy_arrays(state.grid, state.rho.values, state.u.values, state.d.values,
                         p, dissipation_cum)


def convexity_gap(x, gamma: float, delta: float = 0.0):
    """``(x^gamma - gamma (x - 1) - 1, ratio)`` for the convexity lower bounds.

    The ratio divides by ``|x-1|^2`` when ``gamma < 2`` and ``|x-1| <= 1/2``
    and by ``|x-1|^gamma`` otherwise.  Points closer to 1 than ``delta``
    (or exactly at 1) get ``nan`` because the ratio is 0/0 there.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("convexity gap needs x >= 0")
    value = x ** gamma - gamma * (x - 1.0) - 1.0
    r = np.abs(x - 1.0)
    power = np.where((gamma < 2) & (r <= 0.5), 2.0, gamma)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where((r > 0) & (r >= delta), value / r ** power, np.nan)
    if value.ndim == 0:
        return float(value), float(ratio)
    return value, ratio


def sampled_nu(gamma: float, delta: float = 1e-3, xmax: float = 4.0, n: int = 4001) -> float:
    """Smallest sampled convexity ratio over ``[0, xmax]`` away from ``x = 1``."""
    _, ratio = convexity_gap(np.linspace(0.0, xmax, n), gamma, delta)
    return float(np.nanmin(ratio))


def _lp(grid: Grid, f, q: float) -> float:
    return float(grid.integrate(np.abs(f) ** q) ** (1.0 / q))


def density_metrics(state: State, p: Params):
    """``(||rho-1||_{L^gamma}, ||phi||_{L^2(small)}, ||phi||_{L^gamma(large)})``.

    ``phi = (rho - mean rho)/eps``; "small" is ``|rho-1| <= 1/2``.
    """
    g = state.grid
    rho = state.rho.values
    phi = (rho - g.mean(rho)) / p.eps
    small = np.abs(rho - 1.0) <= 0.5
    return (_lp(g, rho - 1.0, p.gamma),
            _lp(g, np.where(small, phi, 0.0), 2.0),
            _lp(g, np.where(small, 0.0, phi), p.gamma))


def velocity_split(state: State, p: Params | None = None):
    """L2 norms of u on ``|rho-1| <= 1/2`` and on its complement.

    The boundary case ``|rho-1| = 1/2`` is put in the first set so the two
    supports are disjoint and the norms obey Pythagoras exactly.
    """
    g = state.grid
    small = np.abs(state.rho.values - 1.0) <= 0.5
    u = state.u.values
    return g.l2(np.where(small, u, 0.0)), g.l2(np.where(small, 0.0, u))


def qp_norms(ctx: PoissonContext, u) -> tuple:
    q = ctx.project_Q_a(u)
    g = ctx.grid
    return g.l2(q), g.l2(np.asarray(u) - q)


def projected_convergence(trajectory, reference, ctx: PoissonContext | None = None):
    """Space-time squared L2 distances ``(Pu_err, Qu_norm, u_err)``.

    Both arguments are sequences of states (or objects with ``states``)
    sampled at the same times.  Integrals in time use the trapezoid rule;
    a single sample gives zero.
    """
    traj = getattr(trajectory, "states", trajectory)
    ref = getattr(reference, "states", reference)
    if len(traj) != len(ref):
        raise ValueError("trajectory and reference have different sample counts")
    times = np.array([s.t for s in traj])
    if not np.allclose(times, [s.t for s in ref], rtol=0, atol=1e-12):
        raise ValueError("trajectory and reference are sampled at different times")
    g = traj[0].grid
    for s in list(traj) + list(ref):
        if not g.same_as(s.grid):
            raise ValueError("all states must share one grid")
    ctx = ctx or PoissonContext(g)
    pe, qn, ue = [], [], []
    for a, b in zip(traj, ref):
        u, v = a.u.values, b.u.values
        q = ctx.project_Q_a(u)
        pe.append(g.l2(u - q - v) ** 2)
        qn.append(g.l2(q) ** 2)
        ue.append(g.l2(u - v) ** 2)
    if len(times) < 2:
        return 0.0, 0.0, 0.0
    return (float(trapezoid(pe, times)), float(trapezoid(qn, times)), float(trapezoid(ue, times)))
