# %% [markdown]
# # Neumann modes and viscous boundary damping
#
# Every mode whose gradient does not vanish on the boundary picks up a
# damping correction of size sqrt(eps).  On a disk the radial modes have
# zero tangential gradient on the circle, so they escape it.

# %%
from lclimit.acoustics import mode_expansion, neumann_modes, predicted_excess_rate

for kind in ("rectangle", "disk"):
    for m in neumann_modes(kind, 5):
        e = mode_expansion(m, 1.0)
        print(f"{kind:9s} {str(m.index):8s} lambda0={m.lambda0:.4f}  boundary={e.boundary_integral:.4f}"
              f"  Re(i lambda1)={e.i_lambda1_plus.real:+.4f}")

# %% [markdown]
# Measured in a full compressible run, the extra decay on a no-slip box
# over the interior viscous rate (this takes a few seconds):

# %%
from lclimit.acoustics import damping_run

eps = 0.04
box, line = damping_run(eps, dim=2, points=64), damping_run(eps, dim=1, points=64)
print(f"excess rate {box.rate - line.rate:.3f}, predicted {predicted_excess_rate(eps):.3f}")
