# %% [markdown]
# # One compressible run at small Mach number
#
# Well-prepared data: density within O(eps) of 1 and a divergence-free
# velocity.  The director stays in the unit ball and the discrete energy
# plus accumulated dissipation never exceeds its initial value.

# %%
import numpy as np
from lclimit.compressible import run, well_prepared_initial
from lclimit.fields import Grid, Params
from lclimit.trajectory import SchemeConfig

grid = Grid((2 * np.pi, 2 * np.pi), (48, 48))
p = Params(mu=0.5, lam=0.5, zeta=0.5, eps=0.05)
traj = run(well_prepared_initial(grid, p, seed=1), p, SchemeConfig(dt=2e-3, t_end=0.2, output_every=20))

# %%
E = traj.column("E_eps") + traj.column("dissipation")
print("max |d|           ", traj.column("max|d|").max())
print("energy excess     ", (E / E[0] - 1).max())
print("sup ||rho - 1||   ", traj.column("L2(rho-1)").max(), "(compare eps =", p.eps, ")")
print("final ||Qu||      ", traj.column("L2(Qu)")[-1])
