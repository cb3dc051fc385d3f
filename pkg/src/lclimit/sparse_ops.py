"""Sparse finite-difference operators on bounded (vertex-centered) rectangles.

Velocity-like unknowns live on interior nodes only (zero on every wall);
density-like unknowns live on all nodes.  ``G[a]`` is the centered
difference from all nodes to interior nodes, and ``D[a]`` is defined as its
negative adjoint under the trapezoidal weights, so that
``sum(w * rho * D m) == -sum(w_int * m * G rho)`` holds exactly.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .fields import Grid


def _kron_axis(grid: Grid, A1, axis: int):
    mats = [sp.identity(n, format="csr") for n in grid.points]
    mats[axis] = sp.csr_matrix(A1)
    out = mats[0]
    for m in mats[1:]:
        out = sp.kron(out, m, format="csr")
    return out


class BoundedOps:
    def __init__(self, grid: Grid):
        if grid.periodic:
            raise ValueError("BoundedOps needs a bounded grid")
        self.grid = grid
        interior = ~grid.boundary_mask
        self.interior = interior
        self.int_idx = np.flatnonzero(interior.ravel())
        self.n_full = int(np.prod(grid.shape))
        self.n_int = self.int_idx.size
        w_full = grid.weights.ravel()
        w_int = w_full[self.int_idx]
        G, D, L = [], [], []
        for ax in range(grid.dim):
            n, h = grid.points[ax], grid.spacing[ax]
            c1 = sp.diags([-np.ones(n - 1), np.ones(n - 1)], [-1, 1]) / (2 * h)
            Ga = _kron_axis(grid, c1, ax)[self.int_idx]
            G.append(Ga.tocsr())
            Da = -sp.diags(1.0 / w_full) @ Ga.T @ sp.diags(w_int)
            D.append(Da.tocsr())
            l1 = sp.diags([np.ones(n - 1), -2 * np.ones(n), np.ones(n - 1)], [-1, 0, 1]) / h ** 2
            L.append(_kron_axis(grid, l1, ax))
        self.G = G
        self.D = D
        lap_full = sum(L)
        self.lap_full = lap_full.tocsr()
        self.lap_int = lap_full[self.int_idx][:, self.int_idx].tocsr()

    def to_int(self, f):
        return np.asarray(f).ravel()[self.int_idx]

    def from_int(self, x):
        out = np.zeros(self.n_full)
        out[self.int_idx] = x
        return out.reshape(self.grid.shape)

    def dirichlet_solver(self, c: float):
        """Solver for ``(I - c lap) x = r`` on interior nodes (walls held fixed)."""
        return _dirichlet_factor(self.grid, float(c))

    def lap_boundary_contribution(self, f):
        """Interior values of ``lap`` applied to the wall values of ``f`` alone."""
        fb = np.where(self.interior, 0.0, f).ravel()
        return (self.lap_full @ fb)[self.int_idx]


@lru_cache(maxsize=16)
def bounded_ops(grid: Grid) -> BoundedOps:
    return BoundedOps(grid)


@lru_cache(maxsize=32)
def _dirichlet_factor(grid: Grid, c: float):
    ops = bounded_ops(grid)
    A = sp.identity(ops.n_int, format="csc") - c * ops.lap_int.tocsc()
    return spla.factorized(A.tocsc())
