"""Acoustic mode damping measured in full compressible runs.

A small density perturbation along the lowest Neumann mode is released
with the fluid at rest.  On a rectangle with no-slip walls the mode loses
energy in a viscous layer of width ``sqrt(eps)``, which adds
``|Re(i lam1)| / sqrt(eps)`` to the interior viscous rate.  On an interval
there is no tangential direction, the boundary integral vanishes and only
the eps-independent interior rate remains.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..compressible import advance, linear_ops
from ..fields import Grid, Params, State
from ..trajectory import SchemeConfig
from .modes import RECTANGLE, mode_expansion, neumann_modes

#: coefficients of the damping experiment; B = a gamma = 1 and a weak
#: elastic coupling keep the explicit director/momentum exchange stable
DAMPING_PARAMS = dict(mu=1.0, xi=0.0, lam=1.0, alpha=1e-3, a=0.5, gamma=2.0, zeta=1.0)


def _mode_arrays(grid: Grid):
    """``(phi_k, grad phi_k / lam_k)`` of the lowest x-mode on ``[0, L]`` or ``[0, L]^2``."""
    L = grid.extent[0]
    k = np.pi / L
    x = grid.coords[0]
    amp = np.sqrt(2.0 / L)
    if grid.dim == 2:
        amp = amp / np.sqrt(grid.extent[1])
    phi = amp * np.cos(k * x)
    m = np.zeros((grid.dim,) + grid.shape)
    m[0] = -amp * np.sin(k * x)
    return phi, m


def mode_amplitude(state: State, p: Params, phi_k, m_k) -> float:
    """``sqrt(B <phi, phi_k>^2 + <m, m_k>^2)`` with ``phi = (rho - 1)/eps``."""
    g = state.grid
    B = p.a * p.gamma
    phi = (state.rho.values - 1.0) / p.eps
    m = state.rho.values * state.u.values
    b = g.integrate(phi * phi_k)
    c = g.integrate(np.sum(m * m_k, axis=0))
    return float(np.sqrt(B * b * b + c * c))


def decay_rate(times, amplitudes) -> float:
    """Least-squares ``-d/dt log a(t)``."""
    t = np.asarray(times, float)
    return float(-np.polyfit(t, np.log(np.asarray(amplitudes, float)), 1)[0])


@dataclass(frozen=True)
class DampingResult:
    eps: float
    dim: int
    times: np.ndarray
    amplitudes: np.ndarray
    rate: float


def damping_run(eps: float, dim: int = 2, points: int = 128, t_end: float = 1.0,
                perturbation: float = 1e-3, dt_factor: float = 0.125) -> DampingResult:
    """Release the lowest mode on ``[0, pi]^dim`` and fit its decay rate.

    ``dt = dt_factor * eps`` with Crank-Nicolson weighting, so the
    acoustic period is resolved by a fixed number of steps for every eps.
    """
    p = Params(eps=eps, **DAMPING_PARAMS)
    grid = Grid((np.pi,) * dim, (points,) * dim, boundary="dirichlet-rectangle")
    phi_k, m_k = _mode_arrays(grid)
    rho = 1.0 + eps * perturbation * phi_k
    u = np.zeros((dim,) + grid.shape)
    d = np.zeros((dim,) + grid.shape)
    d[0] = 1.0
    state = State.from_arrays(grid, 0.0, rho, u, d)
    cfg = SchemeConfig(dt=dt_factor * eps, t_end=t_end, imex_theta=0.5)
    ops = linear_ops(grid)
    times, amps = [0.0], [mode_amplitude(state, p, phi_k, m_k)]
    for _ in range(cfg.n_steps):
        state, _ = advance(state, p, cfg, ops)
        times.append(state.t)
        amps.append(mode_amplitude(state, p, phi_k, m_k))
    times, amps = np.array(times), np.array(amps)
    return DampingResult(eps, dim, times, amps, decay_rate(times, amps))


def predicted_excess_rate(eps: float, mu: float = DAMPING_PARAMS["mu"], length: float = np.pi) -> float:
    """``|Re(i lam1)| / sqrt(eps)`` for mode (1, 0) of ``[0, L]^2``."""
    mode = next(m for m in neumann_modes(RECTANGLE, 4, (length, length)) if m.index == (1, 0))
    return abs(mode_expansion(mode, mu).i_lambda1_plus.real) / np.sqrt(eps)
