"""Momentum forcings of the acoustic system and their pairings with a test mode.

``assemble_G`` is the whole-space forcing of the ``(phi, Qm)`` system and
``assemble_M`` its bounded-domain counterpart with the viscous term moved
into the operator.  ``i_terms`` splits the pairing ``<c, m>`` into the
seven pieces whose sizes decide whether the projected amplitude equation
stays bounded:

    I1 = -<Q div(rho u x u), m>          I5 =  alpha <grad(F + |grad d|^2 / 2), m>
    I2 =  eps mu <lap(phi u), m>         I6 = -alpha <div(grad d (.) grad d), m>
    I3 =  eps (mu + xi) <grad div(phi u), m>
    I4 = -(a / eps^2) <grad(rho^g - g (rho - 1) - 1), m>
    I7 =  alpha <div((d x N - N x d) / (2 lam)), m>
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..fields import Grid, Params, ScalarField, State, VectorField, force_a, potential_a, stress_a
from ..helmholtz import PoissonContext
from .operator import AcousticVec

I_NAMES = ("I1", "I2", "I3", "I4", "I5", "I6", "I7")


def _phi(state: State, p: Params) -> np.ndarray:
    g = state.grid
    rho = state.rho.values
    return (rho - g.mean(rho)) / p.eps


def default_N(state: State, p: Params) -> np.ndarray:
    """``lam (lap d - f(d))``: the co-rotational rate of a relaxing director."""
    g = state.grid
    d = state.d.values
    return p.lam * (g.vector_lap_a(d) - force_a(d, p.zeta))


def _pressure_excess(rho, p: Params):
    return rho ** p.gamma - p.gamma * (rho - 1.0) - 1.0


def _pieces(state: State, p: Params, N):
    """Momentum forcing pieces, keyed by I-term name (before pairing)."""
    g = state.grid
    rho, u, d = state.rho.values, state.u.values, state.d.values
    phi = _phi(state, p)
    N = default_N(state, p) if N is None else np.asarray(N, float)
    ruu = np.einsum("i...,j...->ij...", rho * u, u)
    Gd = g.grad_vector_a(d)
    dd = np.einsum("ki...,kj...->ij...", Gd, Gd)
    iso = potential_a(d, p.zeta) + 0.5 * np.einsum("ii...->...", dd)
    skew = np.einsum("i...,j...->ij...", d, N)
    skew = (skew - np.swapaxes(skew, 0, 1)) / (2 * p.lam)
    pu = phi * u
    return {
        "I1": -g.div_tensor_a(ruu),
        "I2": p.eps * p.mu * g.vector_lap_a(pu),
        "I3": p.eps * (p.mu + p.xi) * g.grad_a(g.div_a(pu)),
        "I4": -(p.a / p.eps ** 2) * g.grad_a(_pressure_excess(rho, p)),
        "I5": p.alpha * g.grad_a(iso),
        "I6": -p.alpha * g.div_tensor_a(dd),
        "I7": p.alpha * g.div_tensor_a(skew),
    }, N


def _Q(ctx: PoissonContext, v):
    return ctx.project_Q_a(v)


def assemble_G(state: State, p: Params, N=None, ctx: PoissonContext | None = None) -> AcousticVec:
    """Forcing ``(0, G)`` of ``phi_t + A phi / eps = (0, G)``.

    ``G = -Q div(rho u x u) + mu lap Qu + xi grad div u
          - (a/eps^2) grad(rho^g - g(rho-1) - 1) + alpha Q div T``
    with ``T`` the Ericksen stress.
    """
    g = state.grid
    ctx = ctx or PoissonContext(g)
    rho, u, d = state.rho.values, state.u.values, state.d.values
    N = default_N(state, p) if N is None else np.asarray(N, float)
    ruu = np.einsum("i...,j...->ij...", rho * u, u)
    T = stress_a(g, d, N, p)
    G = (-_Q(ctx, g.div_tensor_a(ruu)) + p.mu * g.vector_lap_a(_Q(ctx, u))
         + p.xi * g.grad_a(g.div_a(u))
         - (p.a / p.eps ** 2) * g.grad_a(_pressure_excess(rho, p))
         + p.alpha * _Q(ctx, g.div_tensor_a(T)))
    return AcousticVec(ScalarField(g, np.zeros(g.shape)), VectorField(g, G))


def assemble_M(state: State, p: Params, N=None, ctx: PoissonContext | None = None) -> AcousticVec:
    """Forcing ``(0, M)`` of the viscous acoustic system (six summands).

    Viscosity lives in the operator here, so only the ``eps`` weighted
    correction ``eps (mu + xi) grad div(phi u)`` remains of it.
    """
    g = state.grid
    ctx = ctx or PoissonContext(g)
    parts, _ = _pieces(state, p, N)
    M = (_Q(ctx, parts["I1"]) + parts["I3"] + parts["I4"]
         + _Q(ctx, parts["I5"] + parts["I6"] + parts["I7"]))
    return AcousticVec(ScalarField(g, np.zeros(g.shape)), VectorField(g, M))


def i_terms(state: State, p: Params, m_test, N=None, ctx: PoissonContext | None = None) -> np.ndarray:
    """The seven pairings ``I1..I7`` against the real test field ``m_test``."""
    g = state.grid
    m_test = np.asarray(getattr(m_test, "values", m_test), float)
    ctx = ctx or PoissonContext(g)
    parts, _ = _pieces(state, p, N)
    parts["I1"] = _Q(ctx, parts["I1"])
    return np.array([g.integrate(np.sum(parts[k] * m_test, axis=0)) for k in I_NAMES])


def i7_bound(state: State, p: Params, m_test, N=None) -> float:
    """Cauchy-Schwarz bound ``alpha/(sqrt 2 lam) ||d||_inf ||N||_2 ||grad m||_2``.

    It follows from ``|d x N - N x d| <= sqrt(2) |d| |N|`` after moving the
    divergence onto the test field.
    """
    g = state.grid
    m_test = np.asarray(getattr(m_test, "values", m_test), float)
    N = default_N(state, p) if N is None else np.asarray(N, float)
    dinf = float(np.max(np.sqrt(np.sum(state.d.values ** 2, axis=0))))
    gm = g.l2(g.grad_vector_a(m_test))
    return p.alpha / (np.sqrt(2.0) * p.lam) * dinf * g.l2(N) * gm


def torus_test_mode(grid: Grid, k=(1, 0)) -> np.ndarray:
    """Real gradient test field ``grad phi_k / |k|`` for ``phi_k = sqrt(2/|D|) cos(k.x)``.

    This is the torus analogue of ``m_{k,0}``: unit L2 norm and purely
    compressive, so ``Q`` leaves it unchanged.
    """
    if not grid.periodic:
        raise ValueError("torus test modes need a periodic grid")
    kv = [2 * np.pi * k[i] / grid.extent[i] for i in range(grid.dim)]
    knorm = float(np.sqrt(sum(x * x for x in kv)))
    if knorm == 0:
        raise ValueError("the test mode must be nonconstant")
    arg = sum(kk * x for kk, x in zip(kv, grid.coords))
    amp = np.sqrt(2.0 / grid.volume)
    return np.stack([-amp * kk * np.sin(arg) / knorm for kk in kv])


@dataclass(frozen=True)
class BoundednessReport:
    """``max_t |I_i|`` per eps and their log-log slopes in eps."""

    eps: tuple
    max_abs: np.ndarray          # shape (len(eps), 7)
    slopes: np.ndarray           # shape (7,)
    growth_flags: tuple          # True where max|I_i| grows as eps decreases
    shrink_ok: bool              # I2 and I3 slopes >= shrink_slope

    def as_dict(self) -> dict:
        return {
            "eps": list(self.eps),
            "max_abs": {n: self.max_abs[:, i].tolist() for i, n in enumerate(I_NAMES)},
            "slopes": dict(zip(I_NAMES, self.slopes.tolist())),
            "growth_flags": dict(zip(I_NAMES, self.growth_flags)),
            "shrink_ok": self.shrink_ok,
        }


def boundedness_report(eps_list, series, growth_factor: float = 2.0,
                       shrink_slope: float = 0.9) -> BoundednessReport:
    """Summarize I-term time series from an eps sweep.

    ``series[j]`` is an array ``(n_times, 7)`` for ``eps_list[j]``.  A term
    is flagged when its max at the smallest eps exceeds ``growth_factor``
    times its max at the largest eps.
    """
    eps = np.asarray(eps_list, float)
    if eps.size < 2:
        raise ValueError("need at least two eps values")
    mx = np.array([np.max(np.abs(np.asarray(s)), axis=0) for s in series])
    le = np.log(eps)
    slopes = np.array([np.polyfit(le, np.log(np.maximum(mx[:, i], 1e-300)), 1)[0]
                       for i in range(7)])
    big, small = int(np.argmax(eps)), int(np.argmin(eps))
    flags = tuple(bool(mx[small, i] > growth_factor * mx[big, i]) for i in range(7))
    shrink = bool(slopes[1] >= shrink_slope and slopes[2] >= shrink_slope)
    return BoundednessReport(tuple(eps.tolist()), mx, slopes, flags, shrink)
