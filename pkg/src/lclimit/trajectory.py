"""Scheme configuration, trajectories and the per-step diagnostics row."""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

import numpy as np

from . import snapshot
from .diagnostics import energy_arrays
from .errors import ConfigError
from .fields import Grid, Params, State
from .helmholtz import PoissonContext

COLUMNS = ("t", "E_eps", "dissipation", "mass", "max|d|", "L2(rho-1)", "L2(Qu)", "L2(Pu)")
COLUMNS_INC = COLUMNS + ("div_u",)


@dataclass(frozen=True)
class SchemeConfig:
    """Time-stepping controls.

    ``imex_theta`` weights the implicit stiff part (1 is backward Euler,
    1/2 Crank-Nicolson).  Snapshots are kept every ``output_every`` steps
    and at the final time.
    """

    dt: float
    t_end: float
    imex_theta: float = 1.0
    cfl_safety: float = 0.9
    director_substeps: int = 1
    output_every: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if not self.t_end >= 0:
            raise ConfigError(f"t_end must be non-negative, got {self.t_end}")
        if not 0.5 <= self.imex_theta <= 1.0:
            raise ConfigError(f"imex_theta must lie in [1/2, 1], got {self.imex_theta}")
        if not 0 < self.cfl_safety <= 1:
            raise ConfigError(f"cfl_safety must lie in (0, 1], got {self.cfl_safety}")
        if int(self.director_substeps) < 1:
            raise ConfigError("director_substeps must be at least 1")
        if int(self.output_every) < 1:
            raise ConfigError("output_every must be at least 1")

    @property
    def n_steps(self) -> int:
        return int(np.ceil(self.t_end / self.dt - 1e-9))

    def advective_limit(self, grid: Grid, u) -> float:
        return self.cfl_safety * min(grid.spacing) / (float(np.max(np.abs(u))) + 1.0)

    def check(self, grid: Grid, u) -> None:
        """Raise :class:`ConfigError` if ``dt`` breaks the advective bound."""
        lim = self.advective_limit(grid, u)
        if self.dt > lim:
            raise ConfigError(f"dt = {self.dt:.3g} exceeds the advective limit {lim:.3g}")


@dataclass
class Trajectory:
    """Snapshots at output times plus one diagnostics row per step."""

    columns: tuple
    states: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows])

    def append_state(self, state: State) -> None:
        if self.states and not state.t > self.states[-1].t:
            raise ValueError("trajectory times must increase strictly")
        self.states.append(state)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.columns)
            for r in self.rows:
                w.writerow([repr(float(x)) for x in r])

    def write_snapshots(self, directory, prefix: str = "state") -> list:
        os.makedirs(directory, exist_ok=True)
        paths = []
        for i, s in enumerate(self.states):
            path = os.path.join(directory, f"{prefix}_{i:05d}.lclf")
            snapshot.save(path, s)
            paths.append(path)
        return paths


def diagnostics_row(state: State, p: Params, dissipation_cum: float, ctx: PoissonContext,
                    incompressible: bool = False) -> tuple:
    g = state.grid
    rho, u, d = state.rho.values, state.u.values, state.d.values
    E = energy_arrays(g, rho, u, d, p).total
    q = ctx.project_Q_a(u)
    row = (state.t, E, dissipation_cum, g.integrate(rho),
           float(np.max(np.sqrt(np.sum(d ** 2, axis=0)))),
           g.l2(rho - 1.0), g.l2(q), g.l2(u - q))
    if incompressible:
        div = ctx.div_a(u)
        if not g.periodic:
            div = div[~g.boundary_mask]
        row = row + (float(np.max(np.abs(div))),)
    return row
