# %% [markdown]
# # Counting Fock eigenvalues
#
# The free Hamiltonian on the bosonic Fock space over frequencies
# `omega_1 < omega_2 < ...` has eigenvalues `sum n_k omega_k`. `N(E)` counts
# them (with multiplicity, vacuum included) up to `E`. For `omega_n = n` this
# is the cumulative partition function.

# %%
import numpy as np

from kronlab import count_N, generate, spectrum_up_to
from kronlab.tauber import asymptotic_vs_exact, solve_saddle

ints = generate("powerlaw", 64, A=1.0, alpha=1.0)
print([count_N(ints, E).N for E in range(11)])

# %% [markdown]
# Generic frequencies give a simple spectrum; the integer system has
# degeneracies.

# %%
print(spectrum_up_to(ints, 4.0))
rough = generate("powerlaw", 32, A=1.0, alpha=1.5, mu="invlog", c=0.1)
print(spectrum_up_to(rough, 4.0))

# %% [markdown]
# ## Saddle-point asymptotics
#
# `sigma_E` solves `phi'(sigma) = -E` with `phi(s) = -sum log(1 - e^{-s omega})`.
# The saddle approximation `N~(E)` tracks the exact count; the ratio drifts
# toward 1 as `E` grows.

# %%
for alpha, top in ((1.0, 62), (1.5, 140), (2.0, 280)):
    sys = generate("powerlaw", 64, A=1.0, alpha=alpha)
    grid = np.round(np.linspace(top / 8, top, 8))
    rows = asymptotic_vs_exact(sys, grid)
    print(f"alpha={alpha}:", " ".join(f"{r.E:g}:{r.ratio:.4f}" for r in rows))

# %%
r = solve_saddle(ints, 1e6)
print(f"E=1e6: sigma_E={r.sigma:.3e}, log N~ = {r.log_N_tilde:.1f}")
