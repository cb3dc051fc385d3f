# %% [markdown]
# # Splitting a velocity field into its solenoidal and gradient parts
#
# `PoissonContext` caches the transforms for a grid.  On a torus it works
# in Fourier space; on a box it uses cosine/sine transforms so that the
# gradient part has zero normal component on the walls.

# %%
import numpy as np
from lclimit.fields import Grid
from lclimit.helmholtz import PoissonContext

rng = np.random.default_rng(0)
for grid in (Grid((2 * np.pi, 2 * np.pi), (64, 64)),
             Grid((np.pi, np.pi), (65, 65), boundary="dirichlet-rectangle")):
    ctx = PoissonContext(grid)
    v = rng.standard_normal((2,) + grid.shape)
    Pv, Qv = ctx.project_P_a(v), ctx.project_Q_a(v)
    print(grid.boundary,
          "| P idempotent:", f"{grid.l2(ctx.project_P_a(Pv) - Pv):.1e}",
          "| div Pv:", f"{grid.l2(ctx.div_a(Pv)):.1e}",
          "| split energy:", f"{grid.l2(Pv) ** 2 + grid.l2(Qv) ** 2:.6f} vs {grid.l2(v) ** 2:.6f}")
