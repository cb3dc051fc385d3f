"""Mollification by the standard bump and the measured approximation rate."""
from __future__ import annotations

import numpy as np

from ..fields import Grid, ScalarField


def bump(r2):
    """``exp(-1/(1-|x|^2))`` inside the unit ball, 0 outside (unnormalized)."""
    r2 = np.asarray(r2, dtype=float)
    out = np.zeros_like(r2)
    inside = r2 < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - r2[inside]))
    return out


def kernel(grid: Grid, delta: float) -> np.ndarray:
    """``chi_delta`` sampled on the torus (periodic distance), unit discrete mass."""
    if not grid.periodic:
        raise ValueError("mollification is implemented on periodic grids")
    if delta < 2 * max(grid.spacing):
        raise ValueError(f"delta = {delta} is below two grid spacings; the kernel is unresolved")
    if 2 * delta >= min(grid.extent):
        raise ValueError("delta is too large for the periodic box")
    r2 = np.zeros(grid.shape)
    for x, L in zip(grid.coords, grid.extent):
        dx = np.minimum(x, L - x)
        r2 = r2 + (dx / delta) ** 2
    k = bump(r2)
    return k / grid.integrate(k)


def mollify_array(grid: Grid, g: np.ndarray, delta: float) -> np.ndarray:
    kh = grid.rfftn(kernel(grid, delta))
    cell = float(np.prod(grid.spacing))
    return grid.irfftn(grid.rfftn(g) * kh) * cell


def mollify(g: ScalarField, delta: float) -> ScalarField:
    """``g * chi_delta`` by FFT convolution (periodic quadrature)."""
    return ScalarField(g.grid, mollify_array(g.grid, g.values, delta))


def mollifier_rates(g: ScalarField, p: float, deltas) -> dict:
    """Fit the slope of ``log ||g - g*chi_delta||_{L^p}`` against ``log delta``."""
    deltas = np.asarray(sorted(deltas, reverse=True), dtype=float)
    errs = []
    for d in deltas:
        diff = g.values - mollify_array(g.grid, g.values, d)
        errs.append(g.grid.integrate(np.abs(diff) ** p) ** (1.0 / p))
    errs = np.array(errs)
    slope, intercept = np.polyfit(np.log(deltas), np.log(errs), 1)
    return {"deltas": deltas.tolist(), "errors": errs.tolist(),
            "slope": float(slope), "intercept": float(intercept)}
