# %% [markdown]
# # Smoothing rates and resonant time averages

# %%
import numpy as np
from lclimit.acoustics import mollifier_rates, resonant_envelope
from lclimit.fields import Grid, ScalarField

g = Grid((8.0, 8.0), (512, 512))
X, Y = g.coords
r = mollifier_rates(ScalarField(g, np.exp(-((X - 4) ** 2 + (Y - 4) ** 2))), 2.0, (0.4, 0.2, 0.1, 0.05))
print("||g - g*chi_delta|| slope in delta:", round(r["slope"], 3))

# %% [markdown]
# Two modes with different frequencies average out at a rate eps; equal
# frequencies do not.

# %%
for eps in (0.1, 0.05, 0.025, 0.0125):
    print(eps, resonant_envelope(1.0, np.sqrt(2), eps, 1.0), resonant_envelope(1.0, 1.0, eps, 1.0))
