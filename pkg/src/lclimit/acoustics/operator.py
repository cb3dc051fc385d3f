"""The acoustic operator ``A(phi, m) = (div m, B grad phi)`` and its exact flow.

``semigroup_L(t)`` solves ``v_t + A v = 0``.  On a Fourier mode with
wavenumber k, writing ``q = k_hat . m_hat`` and ``w = sqrt(B) |k|``::

    phi(t) = cos(w t) phi0 - i (|k|/w)   sin(w t) q0
    q(t)   = cos(w t) q0   - i (B|k|/w)  sin(w t) phi0

while the part of ``m_hat`` orthogonal to k does not move.  The
derivative symbol has its Nyquist entry removed, which makes the flow the
exact exponential of the discrete operator used by :func:`apply_A`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..fields import Grid, ScalarField, VectorField


@dataclass(frozen=True)
class AcousticVec:
    phi: ScalarField
    m: VectorField

    def __post_init__(self):
        if not self.phi.grid.same_as(self.m.grid):
            raise ValueError("phi and m must live on one grid")

    @property
    def grid(self) -> Grid:
        return self.phi.grid

    @classmethod
    def from_arrays(cls, grid: Grid, phi, m) -> "AcousticVec":
        return cls(ScalarField(grid, phi), VectorField(grid, m))

    @classmethod
    def zeros(cls, grid: Grid) -> "AcousticVec":
        return cls.from_arrays(grid, np.zeros(grid.shape), np.zeros((grid.dim,) + grid.shape))

    def pack(self) -> np.ndarray:
        return np.concatenate([self.phi.values[None], self.m.values])

    @classmethod
    def unpack(cls, grid: Grid, arr) -> "AcousticVec":
        return cls.from_arrays(grid, arr[0], arr[1:])

    def __add__(self, other: "AcousticVec") -> "AcousticVec":
        return AcousticVec(self.phi + other.phi, self.m + other.m)

    def __sub__(self, other: "AcousticVec") -> "AcousticVec":
        return AcousticVec(self.phi - other.phi, self.m - other.m)

    def __mul__(self, c) -> "AcousticVec":
        return AcousticVec(self.phi * c, self.m * c)

    __rmul__ = __mul__

    def weighted_energy(self, B: float) -> float:
        """``B ||phi||^2 + ||m||^2``."""
        return B * self.phi.norm() ** 2 + self.m.norm() ** 2

    def max_abs_diff(self, other: "AcousticVec") -> float:
        return float(np.max(np.abs(self.pack() - other.pack())))


def _check_B(B):
    if not B > 0:
        raise ValueError(f"B must be positive, got {B}")


def apply_A_arrays(grid: Grid, packed: np.ndarray, B: float) -> np.ndarray:
    phi, m = packed[0], packed[1:]
    return np.concatenate([grid.div_a(m)[None], B * grid.grad_a(phi)])


def apply_A(v: AcousticVec, B: float) -> AcousticVec:
    _check_B(B)
    return AcousticVec.unpack(v.grid, apply_A_arrays(v.grid, v.pack(), B))


def _flow_hat(grid: Grid, phi_h, m_h, t: float, B: float):
    ik = grid.rfft_derivative_symbols
    kk = np.sqrt(sum(-(s ** 2).real for s in ik))
    safe = np.where(kk > 0, kk, 1.0)
    khat = [np.where(kk > 0, (s / 1j).real / safe, 0.0) for s in ik]
    w = np.sqrt(B) * kk
    c, s = np.cos(w * t), np.sin(w * t)
    sw = np.where(kk > 0, s / np.where(kk > 0, w, 1.0), 0.0)   # sin(wt)/w
    q0 = sum(k * x for k, x in zip(khat, m_h))
    phi_t = c * phi_h - 1j * kk * sw * q0
    q_t = np.where(kk > 0, c * q0 - 1j * B * kk * sw * phi_h, q0)
    m_t = [x + k * (q_t - q0) for k, x in zip(khat, m_h)]
    return phi_t, m_t


def semigroup_arrays(grid: Grid, packed: np.ndarray, t: float, B: float) -> np.ndarray:
    phi_h = grid.rfftn(packed[0])
    m_h = [grid.rfftn(x) for x in packed[1:]]
    p, m = _flow_hat(grid, phi_h, m_h, t, B)
    return np.concatenate([grid.irfftn(p)[None], np.stack([grid.irfftn(x) for x in m])])


def semigroup_L(t: float, v0: AcousticVec, B: float) -> AcousticVec:
    """Exact solution of ``v_t + A v = 0`` at time ``t`` (torus only)."""
    _check_B(B)
    if not v0.grid.periodic:
        raise ValueError("semigroup_L needs a periodic grid; use the Neumann mode expansion "
                         "on bounded domains")
    return AcousticVec.unpack(v0.grid, semigroup_arrays(v0.grid, v0.pack(), t, B))


def _max_frequency(grid: Grid, B: float) -> float:
    ik = grid.rfft_derivative_symbols
    return float(np.sqrt(B) * np.sqrt(np.max(sum(-(s ** 2).real for s in ik))))


Forcing = Callable[[float], AcousticVec]


def _as_callable(forcing, grid: Grid):
    """Callable forcing, or piecewise-linear interpolation of ``(times, samples)``."""
    if forcing is None:
        return None
    if callable(forcing):
        return lambda s: forcing(s).pack()
    times, samples = forcing
    times = np.asarray(times, dtype=float)
    data = np.stack([v.pack() for v in samples])
    if times.ndim != 1 or len(times) != len(data) or np.any(np.diff(times) <= 0):
        raise ValueError("sampled forcing needs strictly increasing times, one sample each")

    def f(s):
        j = int(np.clip(np.searchsorted(times, s) - 1, 0, len(times) - 2))
        w = (s - times[j]) / (times[j + 1] - times[j])
        return (1 - w) * data[j] + w * data[j + 1]
    return f


def duhamel_solve(v0: AcousticVec, forcing, t: float, eps: float, B: float,
                  panels: int | None = None, order: int = 8) -> AcousticVec:
    """``v(t) = L(t/eps) v0 + int_0^t L((t-s)/eps) G(s) ds``.

    ``forcing`` is ``None``, a callable ``s -> AcousticVec`` or a pair
    ``(times, samples)`` that is interpolated linearly in time.  The
    integral uses composite Gauss-Legendre quadrature; by default the
    panel count keeps the fastest resolved phase under one radian per panel.
    """
    _check_B(B)
    if not eps > 0:
        raise ValueError("eps must be positive")
    grid = v0.grid
    out = semigroup_arrays(grid, v0.pack(), t / eps, B)
    G = _as_callable(forcing, grid)
    if G is None or t == 0:
        return AcousticVec.unpack(grid, out)
    if panels is None:
        panels = max(4, int(np.ceil(_max_frequency(grid, B) * abs(t) / eps / order)))
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, t, panels + 1)
    acc = np.zeros_like(out)
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        for xi, wi in zip(x, w):
            s = a + half * (xi + 1.0)
            acc += wi * half * semigroup_arrays(grid, G(s), (t - s) / eps, B)
    return AcousticVec.unpack(grid, out + acc)


def direct_solve(v0: AcousticVec, forcing, t: float, eps: float, B: float,
                 steps: int | None = None) -> AcousticVec:
    """Classical RK4 for ``v_t + A v / eps = G``; the independent oracle for Duhamel."""
    _check_B(B)
    grid = v0.grid
    G = _as_callable(forcing, grid) or (lambda s: 0.0)
    if steps is None:
        steps = max(16, int(np.ceil(_max_frequency(grid, B) * t / eps / 0.05)))
    h = t / steps

    def rhs(s, y):
        return -apply_A_arrays(grid, y, B) / eps + G(s)

    y = v0.pack().astype(float)
    s = 0.0
    for _ in range(steps):
        k1 = rhs(s, y)
        k2 = rhs(s + h / 2, y + h / 2 * k1)
        k3 = rhs(s + h / 2, y + h / 2 * k2)
        k4 = rhs(s + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        s += h
    return AcousticVec.unpack(grid, y)
