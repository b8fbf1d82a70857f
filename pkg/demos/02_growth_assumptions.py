# %% [markdown]
# # Growth assumptions on phi
#
# Three checks on a grid `sigma = 2^-k`: (alpha) `-sigma phi'` and
# `sigma^2 phi''` grow without bound, (beta) `sigma phi''' / phi''` stays
# bounded, (gamma) `Im phi'(sigma + i x sigma)` has no zero for small `sigma`.

# %%
from kronlab import explicit, generate
from kronlab.tauber import asymptotic_ratio, check_alpha, check_beta, check_gamma

sigmas = [2.0**-k for k in range(1, 13)]
for alpha in (1.0, 2.0):
    sys = generate("powerlaw", 64, A=1.0, alpha=alpha)
    print(alpha, check_alpha(sys, sigmas).passed, check_beta(sys, sigmas).passed)

# %% [markdown]
# A single mode is the standard non-example: `-sigma phi'` stays below 1.

# %%
print(check_alpha(explicit([1.0]), sigmas).values["-sigma*phi1"][-3:])

# %% [markdown]
# The gamma scan is a falsifier. At `sigma = 1/2` it finds genuine zeros
# inside `|x| <= 4`; below that the triangle is clean, so the zero-free
# bound it reports is `sigma0 = 1/2`.

# %%
for alpha in (1.0, 2.0):
    sys = generate("powerlaw", 64, A=1.0, alpha=alpha)
    full = check_gamma(sys, 4.0, sigmas)
    below = check_gamma(sys, 4.0, sigmas, sigma0=0.5)
    print(alpha, full.passed, full.values["zeros"], "| below 1/2:", below.passed)

# %%
ints = generate("powerlaw", 64, A=1.0, alpha=1.0)
for s in (1e-1, 1e-2, 1e-3):
    print(s, asymptotic_ratio(ints, s, 1.0))
