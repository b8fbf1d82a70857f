# %% [markdown]
# # Classical almost periodic waves
#
# A real solution of the wave equation is a finite sum of left and right
# movers at frequencies `+-omega_k`. Action variables `a_w` diagonalize the
# energy and have canonical brackets.

# %%
import numpy as np

from kronlab import generate
from kronlab.classical import (
    ClassicalField,
    action_energy,
    action_observable,
    energy,
    poisson,
    time_series_csv,
)

sys = generate("dispersion", 8, m=1.0)
f = ClassicalField.random(sys, 3, np.random.default_rng(0))
print([energy(f, t) for t in (0.0, 1.0, 10.0)], action_energy(f))

# %%
K = 3
print(poisson(action_observable(sys, K, 0), action_observable(sys, K, 0, conjugate=True)))
print(poisson(action_observable(sys, K, 0), action_observable(sys, K, 1)))

# %%
print(time_series_csv(f, [0.0, 0.5, 1.0], [0.0, 1.0]))
