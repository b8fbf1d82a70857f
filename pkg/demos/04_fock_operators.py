# %% [markdown]
# # Operators on truncated Fock spaces
#
# Raising operators drop states that leave the basis, so relations like the
# CCR hold only on *protected* states whose raised images remain.

# %%
from kronlab import FockSpace, generate
from kronlab.fock import (
    anticommutator,
    boson_ops,
    commutator,
    delta_K,
    fermion_ops,
    field_ops,
    grading,
    hamiltonian,
    identity,
    supercharge,
)

sys = generate("powerlaw", 8, A=1.0, alpha=1.0)
bos = FockSpace.occupancy_cut(sys, 2, M=4)
a, ad = boson_ops(bos, 0)
P = bos.protected()
print("CCR on protected states:", commutator(a, ad).defect(identity(bos), P, block=True))
print("CCR everywhere:", commutator(a, ad).defect(identity(bos)))

# %% [markdown]
# Fermions need Jordan-Wigner signs to anticommute across modes.

# %%
fer = FockSpace.occupancy_cut(sys, 2, statistics="fermion")
b0, _ = fermion_ops(fer, 0)
_, bd1 = fermion_ops(fer, 1)
print("with signs:", anticommutator(b0, bd1).defect())
b0, _ = fermion_ops(fer, 0, jordan_wigner=False)
_, bd1 = fermion_ops(fer, 1, jordan_wigner=False)
print("without:", anticommutator(b0, bd1).defect())

# %%
dbl = FockSpace.occupancy_cut(sys, 2, M=4, doubled=True)
phi, _ = field_ops(dbl, 0.3)
_, pi = field_ops(dbl, -0.5)
ref = identity(dbl) * (1j * delta_K(sys, 2, 0.8))
print("[phi, pi] - i delta_K:", commutator(phi, pi).defect(ref, dbl.protected(), block=True))

# %%
gr = FockSpace.occupancy_cut(sys, 2, M=4, statistics="graded")
Q = supercharge(gr)
print("Q^2 - H:", (Q @ Q).defect(hamiltonian(gr), gr.protected(), block=True))
print("Gamma Q + Q Gamma:", anticommutator(grading(gr), Q).defect())
