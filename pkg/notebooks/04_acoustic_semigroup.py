# %% [markdown]
# # The acoustic group and Duhamel's formula
#
# The wave operator is skew in the weighted energy, so its flow is exact
# and energy preserving.  Forced solutions are written with Duhamel's
# formula and compared with brute-force RK4.

# %%
import numpy as np
from lclimit.acoustics import AcousticVec, direct_solve, duhamel_solve, semigroup_L
from lclimit.fields import Grid

g = Grid((2 * np.pi, 2 * np.pi), (32, 32))
X, Y = g.coords
v0 = AcousticVec.from_arrays(g, np.cos(X) * np.sin(Y), np.stack([0.3 * np.sin(X), 0 * Y]))
B = 1.0
for t in (1.0, 10.0, 100.0):
    print(f"t={t:6.1f}  energy ratio {semigroup_L(t, v0, B).weighted_energy(B) / v0.weighted_energy(B):.15f}")

# %%
forcing = lambda s: AcousticVec.from_arrays(g, 0 * X, np.stack([np.cos(s) * np.sin(Y), 0 * X]))
a = duhamel_solve(v0, forcing, 1.0, 0.1, B)
b = direct_solve(v0, forcing, 1.0, 0.1, B)
print("Duhamel vs RK4:", a.max_abs_diff(b))
