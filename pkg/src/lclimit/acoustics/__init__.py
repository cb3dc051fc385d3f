"""Acoustic operator, exact flow, Neumann modes, forcing diagnostics and damping runs."""
from .damping import DampingResult, damping_run, decay_rate, mode_amplitude, predicted_excess_rate
from .forcing import (I_NAMES, BoundednessReport, assemble_G, assemble_M, boundedness_report,
                      default_N, i7_bound, i_terms, torus_test_mode)
from .modes import (DISK, RECTANGLE, ModeExpansion, NeumannMode, boundary_gram,
                    boundary_layer_profile, damped_bound, gradient_structure_residual,
                    layer_factor, layer_ode_residual, mode_amplitude_solve, mode_expansion,
                    neumann_modes, resonant_average, resonant_envelope)
from .mollifier import bump, kernel, mollifier_rates, mollify, mollify_array
from .operator import (AcousticVec, apply_A, apply_A_arrays, direct_solve, duhamel_solve,
                       semigroup_arrays, semigroup_L)
