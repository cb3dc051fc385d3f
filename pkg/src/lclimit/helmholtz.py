"""Inverse Laplacians and the Helmholtz projectors ``Q = grad lap^-1 div``, ``P = I - Q``.

On the torus everything is diagonal in Fourier space.  On a bounded
rectangle the Neumann Laplacian is diagonalized by a type-I cosine
transform; gradients of cosine series are sine series (type-I sine
transform on the interior nodes) and vice versa, so the divergence and
gradient used here satisfy ``div(grad f) == lap f`` exactly on the
Neumann-compatible subspace.  That is what makes ``Q`` an exact projector.
A field's normal component on the walls is invisible to this divergence.
"""
from __future__ import annotations

import numpy as np
from scipy import fft as sfft

from .fields import Grid, ScalarField, VectorField


class CompatibilityError(ValueError):
    """Neumann problem data with nonzero integral."""


class PoissonContext:
    """Precomputed transform data for one grid.  Immutable after construction."""

    def __init__(self, grid: Grid, compat_tol: float = 1e-8):
        self.grid = grid
        self.compat_tol = compat_tol
        if grid.periodic:
            self._ik = grid.rfft_derivative_symbols            # i*k, Nyquist zeroed
            self._k2eff = sum(-(s ** 2).real for s in self._ik)
            with np.errstate(divide="ignore"):
                inv = np.where(grid.rfft_k2 > 0, -1.0 / grid.rfft_k2, 0.0)
            self._inv_symbol = inv
        else:
            kap = []
            for ax in range(grid.dim):
                n, L = grid.points[ax], grid.extent[ax]
                k = np.pi * np.arange(n) / L
                shape = [1] * grid.dim
                shape[ax] = n
                kap.append(k.reshape(shape))
            self._kappa = tuple(kap)
            # symbol of div_c(grad_c(.)): the top cosine mode has no sine partner
            sym = np.zeros(grid.shape)
            for ax, k in enumerate(kap):
                kk = k.copy()
                kk.reshape(-1)[-1] = 0.0
                sym = sym - kk ** 2
            self._lap_symbol = sym
            with np.errstate(divide="ignore"):
                self._inv_symbol = np.where(sym < 0, 1.0 / np.where(sym < 0, sym, 1.0), 0.0)

    # -- compatible first-order operators (arrays) -----------------------------

    def _dcos_axis(self, f, ax):
        """Derivative along ``ax`` of a cosine series; result vanishes on the walls."""
        g = self.grid
        a = f.ndim - g.dim + ax
        n = g.points[ax]
        X = sfft.dct(f, type=1, axis=a)
        k = np.pi * np.arange(n) / g.extent[ax]
        shape = [1] * f.ndim
        shape[a] = n
        Y = -(k.reshape(shape) * X)
        Y = np.take(Y, np.arange(1, n - 1), axis=a)
        inner = sfft.idst(Y, type=1, axis=a)
        out = np.zeros_like(f)
        idx = [slice(None)] * f.ndim
        idx[a] = slice(1, n - 1)
        out[tuple(idx)] = inner
        return out

    def _dsin_axis(self, f, ax):
        """Derivative along ``ax`` of the sine series built from interior nodes."""
        g = self.grid
        a = f.ndim - g.dim + ax
        n = g.points[ax]
        inner = np.take(f, np.arange(1, n - 1), axis=a)
        S = sfft.dst(inner, type=1, axis=a)
        k = np.pi * np.arange(1, n - 1) / g.extent[ax]
        shape = [1] * f.ndim
        shape[a] = n - 2
        Xi = k.reshape(shape) * S
        zshape = list(f.shape)
        zshape[a] = 1
        z = np.zeros(zshape)
        X = np.concatenate([z, Xi, z], axis=a)
        return sfft.idct(X, type=1, axis=a)

    def grad_a(self, f):
        g = self.grid
        if g.periodic:
            fh = g.rfftn(f)
            return np.stack([g.irfftn(s * fh) for s in self._ik])
        return np.stack([self._dcos_axis(np.asarray(f, float), ax) for ax in range(g.dim)])

    def div_a(self, v):
        g = self.grid
        if g.periodic:
            return g.irfftn(sum(s * g.rfftn(v[i]) for i, s in enumerate(self._ik)))
        return sum(self._dsin_axis(np.asarray(v[i], float), i) for i in range(g.dim))

    def inv_laplacian_a(self, g_arr):
        grid = self.grid
        g_arr = np.asarray(g_arr, dtype=float)
        if grid.periodic:
            return grid.irfftn(self._inv_symbol * grid.rfftn(g_arr))
        total = grid.integrate(g_arr)
        scale = grid.l2(g_arr) * np.sqrt(grid.volume)
        if abs(total) > self.compat_tol * max(scale, np.finfo(float).tiny):
            raise CompatibilityError(
                f"Neumann data must integrate to zero (integral {total:.3e})")
        axes = tuple(range(-grid.dim, 0))
        X = sfft.dctn(g_arr, type=1, axes=axes)
        return sfft.idctn(self._inv_symbol * X, type=1, axes=axes)

    def project_Q_a(self, v):
        g = self.grid
        v = np.asarray(v, dtype=float)
        if g.periodic:
            vh = [g.rfftn(v[i]) for i in range(g.dim)]
            dvh = sum(s * vh[i] for i, s in enumerate(self._ik))
            with np.errstate(divide="ignore", invalid="ignore"):
                phi = np.where(self._k2eff > 0, -dvh / np.where(self._k2eff > 0, self._k2eff, 1.0), 0.0)
            return np.stack([g.irfftn(s * phi) for s in self._ik])
        dv = self.div_a(v)
        axes = tuple(range(-g.dim, 0))
        phi = sfft.idctn(self._inv_symbol * sfft.dctn(dv, type=1, axes=axes), type=1, axes=axes)
        return self.grad_a(phi)

    def project_P_a(self, v):
        return np.asarray(v, dtype=float) - self.project_Q_a(v)

    def potential_a(self, v):
        """Scalar ``psi = lap^-1 div v`` with ``Q v = grad psi``."""
        g = self.grid
        dv = self.div_a(v)
        if g.periodic:
            with np.errstate(divide="ignore", invalid="ignore"):
                inv = np.where(self._k2eff > 0, -1.0 / np.where(self._k2eff > 0, self._k2eff, 1.0), 0.0)
            return g.irfftn(inv * g.rfftn(dv))
        axes = tuple(range(-g.dim, 0))
        return sfft.idctn(self._inv_symbol * sfft.dctn(dv, type=1, axes=axes), type=1, axes=axes)

    # -- field-level API --------------------------------------------------------

    def _check(self, f):
        if not self.grid.same_as(f.grid):
            from .fields import GridMismatchError
            raise GridMismatchError("field and Poisson context use different grids")

    def grad(self, f: ScalarField) -> VectorField:
        self._check(f)
        return VectorField(self.grid, self.grad_a(f.values))

    def div(self, v: VectorField) -> ScalarField:
        self._check(v)
        return ScalarField(self.grid, self.div_a(v.values))


def inv_laplacian(g: ScalarField, ctx: PoissonContext) -> ScalarField:
    """Zero-mean solution of ``lap f = g`` (Neumann walls on a rectangle).

    On the torus the mean of ``g`` is discarded; on a rectangle a nonzero
    integral raises :class:`CompatibilityError`.
    """
    ctx._check(g)
    return ScalarField(g.grid, ctx.inv_laplacian_a(g.values))


def project_Q(v: VectorField, ctx: PoissonContext) -> VectorField:
    ctx._check(v)
    return VectorField(v.grid, ctx.project_Q_a(v.values))


def project_P(v: VectorField, ctx: PoissonContext) -> VectorField:
    ctx._check(v)
    return VectorField(v.grid, ctx.project_P_a(v.values))
