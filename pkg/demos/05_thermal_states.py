# %% [markdown]
# # Gibbs, super-KMS and the Witten index

# %%
import numpy as np

from kronlab import FockSpace, explicit, generate
from kronlab.fock import boson_ops, supercharge
from kronlab.kms import (
    ThermalContext,
    gibbs,
    kms_check,
    pre_skms_nullspace,
    random_operator,
    skms,
    super_d,
    twisted_kms_defect,
    witten_index,
)

sys = generate("powerlaw", 8, A=1.0, alpha=1.0)
bos = FockSpace.occupancy_cut(sys, 2, M=4)
ctx = ThermalContext(bos, 1.0)
rng = np.random.default_rng(0)
print("KMS defect:", max(kms_check(ctx, random_operator(bos, rng), random_operator(bos, rng)) for _ in range(20)))
a, ad = boson_ops(bos, 0)
print("<n_1> =", gibbs(ctx, ad @ a).real)

# %% [markdown]
# On the graded space the supertrace functional kills `d`-exact operators
# and satisfies the twisted KMS relation.

# %%
gr = FockSpace.occupancy_cut(sys, 2, M=4, statistics="graded")
Q = supercharge(gr)
sctx = ThermalContext(gr, 1.0)
x = random_operator(gr, rng, kind="odd")
y = random_operator(gr, rng, kind="even")
print(abs(skms(sctx, super_d(Q, x))), twisted_kms_defect(sctx, x, y))

# %%
big = FockSpace.occupancy_cut(sys, 2, M=40, statistics="graded")
for beta in (0.1, 1.0, 5.0):
    print(beta, witten_index(ThermalContext(big, beta)))

# %% [markdown]
# On small matrix algebras the twisted KMS condition has a one-dimensional
# solution space.

# %%
one = explicit([1.0])
for space in (FockSpace.occupancy_cut(one, 1, statistics="fermion"), FockSpace.occupancy_cut(one, 1, M=3, statistics="graded")):
    print(space.dim, pre_skms_nullspace(space, 1.0))
