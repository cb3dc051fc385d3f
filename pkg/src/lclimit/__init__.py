"""Numerical laboratory for the low-Mach limit of compressible nematic liquid-crystal flow.

The compressible solver and its incompressible limit share one director
update; the helpers in :mod:`lclimit.acoustics` cover the linear wave
system, Neumann modes and their boundary-layer damping.
"""
from .compressible import run, step, well_prepared_initial
from .diagnostics import (EnergyReport, convexity_gap, density_metrics, energy,
                          projected_convergence, velocity_split)
from .errors import ConfigError, SolverError
from .fields import (Grid, Params, ScalarField, State, TensorField, VectorField, div,
                     director_force, director_potential, ericksen_stress, grad, laplacian,
                     vector_laplacian, vorticity_tensor)
from .helmholtz import CompatibilityError, PoissonContext, inv_laplacian, project_P, project_Q
from .incompressible import run_inc, step_inc
from .sweep import SweepConfig, SweepReport, sweep
from .trajectory import SchemeConfig, Trajectory

__version__ = "0.1.0"
