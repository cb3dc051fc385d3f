"""Grids, discrete fields and the differential/tensor calculus used by the solvers.

Periodic grids differentiate spectrally (FFT along each axis); bounded
rectangles use second-order centered differences with second-order
one-sided stencils on the boundary rows.

Component conventions
---------------------
* vector fields carry a leading component axis: ``values[i]`` is component i
* tensor fields carry two: ``values[i, j]``
* the velocity gradient is ``(grad u)[i, j] = d_j u_i``
* the divergence of a tensor is taken row-wise: ``out[i] = sum_j d_j T[i, j]``
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import fft as sfft

PERIODIC = "periodic"
DIRICHLET = "dirichlet-rectangle"
BOUNDARY_KINDS = (PERIODIC, DIRICHLET)


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Params:
    """Physical and scaling constants of the scaled liquid-crystal system."""

    mu: float = 1.0
    xi: float = 0.0
    lam: float = 1.0
    alpha: float = 1.0
    a: float = 1.0
    gamma: float = 2.0
    eps: float = 0.1
    zeta: float = 1.0

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if not self.mu + self.xi > 0:
            raise ValueError("mu + xi must be positive")
        if not self.lam > 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if not self.gamma > 1.5:
            raise ValueError(f"gamma must exceed 3/2, got {self.gamma}")
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if not self.zeta > 0:
            raise ValueError(f"zeta must be positive, got {self.zeta}")

    @property
    def B(self) -> float:
        """Linearized sound speed squared ``a * gamma`` at unit density."""
        return self.a * self.gamma

    def pressure(self, rho):
        return self.a * rho ** self.gamma

    def with_eps(self, eps: float) -> "Params":
        return Params(self.mu, self.xi, self.lam, self.alpha, self.a,
                      self.gamma, eps, self.zeta)


@dataclass(frozen=True)
class Grid:
    """Uniform 1D/2D grid.

    Periodic axes hold ``n`` nodes ``x_j = j * L / n``.  Bounded axes are
    vertex-centered and include both walls: ``x_j = j * L / (n - 1)``.
    """

    extent: tuple
    points: tuple
    boundary: str = PERIODIC

    def __post_init__(self):
        extent = tuple(float(e) for e in np.atleast_1d(self.extent))
        points = tuple(int(n) for n in np.atleast_1d(self.points))
        object.__setattr__(self, "extent", extent)
        object.__setattr__(self, "points", points)
        if len(extent) != len(points) or len(points) not in (1, 2):
            raise ValueError("grid must be 1D or 2D with one extent per axis")
        if min(points) < 8:
            raise ValueError("at least 8 points per axis are required")
        if min(extent) <= 0:
            raise ValueError("extents must be positive")
        if self.boundary not in BOUNDARY_KINDS:
            raise ValueError(f"unknown boundary kind {self.boundary!r}")

    @property
    def dim(self) -> int:
        return len(self.points)

    @property
    def shape(self) -> tuple:
        return self.points

    @property
    def periodic(self) -> bool:
        return self.boundary == PERIODIC

    @cached_property
    def spacing(self) -> tuple:
        if self.periodic:
            return tuple(L / n for L, n in zip(self.extent, self.points))
        return tuple(L / (n - 1) for L, n in zip(self.extent, self.points))

    @cached_property
    def axes(self) -> tuple:
        return tuple(np.arange(n) * h for n, h in zip(self.points, self.spacing))

    @cached_property
    def coords(self) -> tuple:
        return tuple(np.meshgrid(*self.axes, indexing="ij"))

    @cached_property
    def weights(self) -> np.ndarray:
        """Quadrature weights: uniform on the torus, trapezoidal on rectangles."""
        w = np.ones(self.shape)
        for ax, (n, h) in enumerate(zip(self.points, self.spacing)):
            wa = np.full(n, h)
            if not self.periodic:
                wa[0] = wa[-1] = h / 2
            shape = [1] * self.dim
            shape[ax] = n
            w = w * wa.reshape(shape)
        return w

    @property
    def volume(self) -> float:
        return float(np.prod(self.extent))

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        if self.periodic:
            return mask
        for ax in range(self.dim):
            idx = [slice(None)] * self.dim
            idx[ax] = 0
            mask[tuple(idx)] = True
            idx[ax] = -1
            mask[tuple(idx)] = True
        return mask

    def same_as(self, other: "Grid") -> bool:
        return (self.extent == other.extent and self.points == other.points
                and self.boundary == other.boundary)

    # -- spectral data (periodic only) --------------------------------------

    def _wavenumbers_1d(self, ax: int, zero_nyquist: bool) -> np.ndarray:
        n, L = self.points[ax], self.extent[ax]
        k = 2 * np.pi * np.fft.fftfreq(n, d=L / n)
        if zero_nyquist and n % 2 == 0:
            k[n // 2] = 0.0
        return k

    @cached_property
    def rfft_wavenumbers(self) -> tuple:
        """Broadcastable wavenumber arrays matching ``scipy.fft.rfftn`` output."""
        ks = []
        for ax in range(self.dim):
            n, L = self.points[ax], self.extent[ax]
            if ax == self.dim - 1:
                k = 2 * np.pi * np.fft.rfftfreq(n, d=L / n)
            else:
                k = 2 * np.pi * np.fft.fftfreq(n, d=L / n)
            shape = [1] * self.dim
            shape[ax] = k.size
            ks.append(k.reshape(shape))
        return tuple(ks)

    @cached_property
    def rfft_k2(self) -> np.ndarray:
        return sum(k ** 2 for k in self.rfft_wavenumbers)

    @cached_property
    def rfft_derivative_symbols(self) -> tuple:
        """``1j*k`` per axis with Nyquist entries zeroed (odd derivatives)."""
        out = []
        for ax, k in enumerate(self.rfft_wavenumbers):
            k = k.copy()
            n = self.points[ax]
            if n % 2 == 0:
                flat = k.reshape(-1)
                flat[n // 2] = 0.0
            out.append(1j * k)
        return tuple(out)

    def rfftn(self, f):
        return sfft.rfftn(f, axes=tuple(range(-self.dim, 0)))

    def irfftn(self, fh):
        return sfft.irfftn(fh, s=self.shape, axes=tuple(range(-self.dim, 0)))

    # -- array-level calculus ------------------------------------------------

    def d(self, f: np.ndarray, axis: int) -> np.ndarray:
        """First derivative of a scalar array along ``axis``."""
        f = np.asarray(f, dtype=float)
        ax = f.ndim - self.dim + axis
        n = self.points[axis]
        if self.periodic:
            k = self._wavenumbers_1d(axis, zero_nyquist=True)[: n // 2 + 1]
            shape = [1] * f.ndim
            shape[ax] = k.size
            fh = sfft.rfft(f, axis=ax)
            return sfft.irfft(1j * k.reshape(shape) * fh, n=n, axis=ax)
        return np.gradient(f, self.spacing[axis], axis=ax, edge_order=2)

    def d2(self, f: np.ndarray, axis: int) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        ax = f.ndim - self.dim + axis
        n = self.points[axis]
        if self.periodic:
            k = self._wavenumbers_1d(axis, zero_nyquist=False)[: n // 2 + 1]
            shape = [1] * f.ndim
            shape[ax] = k.size
            fh = sfft.rfft(f, axis=ax)
            return sfft.irfft(-(k.reshape(shape) ** 2) * fh, n=n, axis=ax)
        h = self.spacing[axis]
        g = np.moveaxis(f, ax, 0)
        out = np.empty_like(g)
        out[1:-1] = (g[2:] - 2 * g[1:-1] + g[:-2]) / h ** 2
        out[0] = (2 * g[0] - 5 * g[1] + 4 * g[2] - g[3]) / h ** 2
        out[-1] = (2 * g[-1] - 5 * g[-2] + 4 * g[-3] - g[-4]) / h ** 2
        return np.moveaxis(out, 0, ax)

    def grad_a(self, f):
        return np.stack([self.d(f, ax) for ax in range(self.dim)])

    def div_a(self, v):
        return sum(self.d(v[i], i) for i in range(self.dim))

    def lap_a(self, f):
        if self.periodic:
            return self.irfftn(-self.rfft_k2 * self.rfftn(f))
        return sum(self.d2(f, ax) for ax in range(self.dim))

    def vector_lap_a(self, v):
        return np.stack([self.lap_a(v[i]) for i in range(self.dim)])

    def grad_vector_a(self, u):
        """``G[i, j] = d_j u_i``."""
        return np.stack([np.stack([self.d(u[i], j) for j in range(self.dim)])
                         for i in range(self.dim)])

    def div_tensor_a(self, T):
        return np.stack([sum(self.d(T[i, j], j) for j in range(self.dim))
                         for i in range(self.dim)])

    def integrate(self, f) -> float:
        return float(np.sum(np.asarray(f) * self.weights))

    def mean(self, f) -> float:
        return self.integrate(f) / self.volume

    def l2(self, f) -> float:
        """L2 norm; vector/tensor arrays are summed over their component axes."""
        f = np.asarray(f)
        sq = f ** 2
        while sq.ndim > self.dim:
            sq = sq.sum(axis=0)
        return float(np.sqrt(self.integrate(sq)))


# -- field values ---------------------------------------------------------------

@dataclass(frozen=True)
class _Field:
    grid: Grid
    values: np.ndarray = field(repr=False)

    rank = 0

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        expected = (self.grid.dim,) * self.rank + self.grid.shape
        if v.shape != expected:
            raise GridMismatchError(
                f"{type(self).__name__} expects shape {expected}, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError(f"{type(self).__name__} contains non-finite entries")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def _check(self, other: "_Field"):
        if not self.grid.same_as(other.grid):
            raise GridMismatchError("fields live on different grids")

    def __add__(self, other):
        self._check(other)
        return type(self)(self.grid, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return type(self)(self.grid, self.values - other.values)

    def __mul__(self, c):
        return type(self)(self.grid, self.values * float(c))

    __rmul__ = __mul__

    def norm(self) -> float:
        return self.grid.l2(self.values)


class ScalarField(_Field):
    rank = 0


class VectorField(_Field):
    rank = 1


class TensorField(_Field):
    rank = 2

    @property
    def T(self) -> "TensorField":
        return TensorField(self.grid, np.swapaxes(self.values, 0, 1))


@dataclass(frozen=True)
class State:
    t: float
    rho: ScalarField
    u: VectorField
    d: VectorField

    def __post_init__(self):
        g = self.rho.grid
        if not (g.same_as(self.u.grid) and g.same_as(self.d.grid)):
            raise GridMismatchError("state fields must share one grid")
        if np.min(self.rho.values) < 0:
            raise ValueError("density must be non-negative")

    @property
    def grid(self) -> Grid:
        return self.rho.grid

    @classmethod
    def from_arrays(cls, grid: Grid, t, rho, u, d) -> "State":
        return cls(float(t), ScalarField(grid, rho), VectorField(grid, u),
                   VectorField(grid, d))


# -- field-level operators --------------------------------------------------------

def _same(*fields):
    g = fields[0].grid
    for f in fields[1:]:
        if not g.same_as(f.grid):
            raise GridMismatchError("operands live on different grids")
    return g


def grad(f: ScalarField) -> VectorField:
    return VectorField(f.grid, f.grid.grad_a(f.values))


def div(v: VectorField) -> ScalarField:
    return ScalarField(v.grid, v.grid.div_a(v.values))


def laplacian(f: ScalarField) -> ScalarField:
    return ScalarField(f.grid, f.grid.lap_a(f.values))


def vector_laplacian(v: VectorField) -> VectorField:
    return VectorField(v.grid, v.grid.vector_lap_a(v.values))


def div_tensor(T: TensorField) -> VectorField:
    return VectorField(T.grid, T.grid.div_tensor_a(T.values))


def vorticity_a(grid: Grid, u: np.ndarray) -> np.ndarray:
    G = grid.grad_vector_a(u)
    return 0.5 * (G - np.swapaxes(G, 0, 1))


def vorticity_tensor(u: VectorField) -> TensorField:
    """Skew part of the velocity gradient, ``(grad u - grad u^T) / 2``."""
    return TensorField(u.grid, vorticity_a(u.grid, u.values))


def potential_a(d: np.ndarray, zeta: float) -> np.ndarray:
    s = np.sum(d ** 2, axis=0) - 1.0
    return s ** 2 / (2 * zeta ** 2)


def force_a(d: np.ndarray, zeta: float) -> np.ndarray:
    s = np.sum(d ** 2, axis=0) - 1.0
    return (2.0 / zeta ** 2) * s * d


def director_potential(d: VectorField, zeta: float) -> ScalarField:
    """Ginzburg-Landau penalty ``(|d|^2 - 1)^2 / (2 zeta^2)``."""
    if not zeta > 0:
        raise ValueError("zeta must be positive")
    return ScalarField(d.grid, potential_a(d.values, zeta))


def director_force(d: VectorField, zeta: float) -> VectorField:
    """Gradient of :func:`director_potential` with respect to d."""
    if not zeta > 0:
        raise ValueError("zeta must be positive")
    return VectorField(d.grid, force_a(d.values, zeta))


def stress_a(grid: Grid, d: np.ndarray, N: np.ndarray, p: Params) -> np.ndarray:
    Gd = grid.grad_vector_a(d)                       # Gd[k, i] = d_i d_k
    dd = np.einsum("ki...,kj...->ij...", Gd, Gd)     # grad d (.) grad d
    iso = potential_a(d, p.zeta) + 0.5 * np.einsum("ii...->...", dd)
    T = -dd
    for i in range(grid.dim):
        T[i, i] += iso
    skew = np.einsum("i...,j...->ij...", d, N)
    T += (skew - np.swapaxes(skew, 0, 1)) / (2 * p.lam)
    return T


def ericksen_stress(state: State, N: VectorField, p: Params) -> TensorField:
    """``(F + |grad d|^2/2) I - grad d (.) grad d + (d x N - N x d) / (2 lam)``.

    The momentum forcing is ``alpha`` times the row-wise divergence.
    """
    _same(state.d, N)
    return TensorField(state.grid, stress_a(state.grid, state.d.values, N.values, p))
