# %% [markdown]
# # Microcanonical averages
#
# `tau_E(a)` averages the diagonal of `a` over eigenstates with energy at most
# `E`. Toeplitz operators `T(f)` have constant diagonal `f_0`, so their
# average is exact; products only approach the classical value.

# %%
from kronlab import TrigPolynomial, bohr_mean, generate
from kronlab.ergodic import (
    classical_limit_table,
    ergodic_constant,
    ergodic_table,
    ergodic_test_function,
    semicommutator_observable,
    toeplitz_observable,
)

sys = generate("powerlaw", 64, A=1.0, alpha=1.5)
f = TrigPolynomial(sys, {(): 0.5, ((0, 1),): 1.0, ((0, -1),): 1.0, ((1, 2),): 0.3j})
print(classical_limit_table(sys, toeplitz_observable(f), [5, 10, 20]).values, bohr_mean(f))

# %%
g = TrigPolynomial(sys, {((0, 1),): 1.0, ((0, -1),): 1.0})
rep = classical_limit_table(sys, semicommutator_observable(g, g), [10, 20, 30, 40])
print(rep.to_csv())

# %% [markdown]
# ## Time averages
#
# Averaging `U(t) a U(-t)` over `[0, M]` kills the off-diagonal part at rate
# `1/M`, so `tau_E(A*A)` falls like `1/M^2`.

# %%
h = ergodic_test_function(sys)
tab = ergodic_table(sys, h, [20.0], [10.0, 100.0, 1000.0])
print([d * M * M for d, M in zip(tab["defect"][0], tab["M"])], "bound", ergodic_constant(h))
