import math

import numpy as np
import pytest

from kronlab.fock import FockSpace, SparseOperator, boson_ops, commutator, fermion_ops, hamiltonian, identity, shift, supercharge
from kronlab.frequencies import explicit, generate
from kronlab.kms import (
    OVERFLOW_EXPONENT,
    ParityError,
    ThermalContext,
    degree,
    gibbs,
    graded,
    kms_check,
    pre_skms_nullspace,
    random_operator,
    sigma_ibeta,
    skms,
    split_parity,
    super_d,
    twisted_kms_defect,
    witten_index,
)

SYS = generate("powerlaw", 16, A=1.0, alpha=1.5)
TOL = 1e-10


@pytest.fixture(scope="module")
def bos():
    return FockSpace.occupancy_cut(SYS, 2, M=4)


@pytest.fixture(scope="module")
def gr():
    return FockSpace.occupancy_cut(SYS, 2, M=4, statistics="graded")


@pytest.mark.parametrize("beta", [0.3, 1.0, 4.0])
def test_kms_condition(bos, beta):
    ctx = ThermalContext(bos, beta)
    rng = np.random.default_rng(11)
    for _ in range(20):
        assert kms_check(ctx, random_operator(bos, rng), random_operator(bos, rng)) <= TOL


def test_gibbs_identity_and_number():
    w, M, beta = 1.3, 30, 0.8
    s = FockSpace.occupancy_cut(explicit([w]), 1, M=M)
    ctx = ThermalContext(s, beta)
    assert gibbs(ctx, identity(s)) == pytest.approx(1.0)
    a, ad = boson_ops(s, 0)
    q = math.exp(-beta * w)
    # truncated geometric mean occupation
    n = np.arange(M + 1)
    ref = np.sum(n * q**n) / np.sum(q**n)
    assert gibbs(ctx, ad @ a).real == pytest.approx(ref, rel=1e-12)


def test_gibbs_vacuum_projector():
    w, beta = 0.9, 1.7
    s = FockSpace.occupancy_cut(explicit([w]), 1, M=60)
    u = shift(s, 0)
    ctx = ThermalContext(s, beta)
    assert gibbs(ctx, identity(s) - u @ u.H).real == pytest.approx(1 - math.exp(-beta * w), rel=1e-12)


def test_fermion_occupation():
    w, beta = 1.1, 0.6
    s = FockSpace.occupancy_cut(explicit([w]), 1, statistics="fermion")
    b, bd = fermion_ops(s, 0)
    x = math.exp(-beta * w)
    assert gibbs(ThermalContext(s, beta), bd @ b).real == pytest.approx(x / (1 + x), rel=1e-14)


def test_sigma_ibeta_entrywise(bos):
    ctx = ThermalContext(bos, 0.5)
    a = random_operator(bos, np.random.default_rng(0))
    w = np.exp(-0.5 * bos.energies)
    ref = np.diag(w) @ a.toarray() @ np.diag(1 / w)
    assert np.allclose(sigma_ibeta(ctx, a).toarray(), ref, rtol=1e-12)


def test_sigma_ibeta_overflow_guard():
    s = FockSpace.occupancy_cut(explicit([1.0]), 1, M=10)
    ctx = ThermalContext(s, OVERFLOW_EXPONENT / 10 + 1)
    a, _ = boson_ops(s, 0)
    sigma_ibeta(ctx, a)  # gap 1: fine
    with pytest.raises(OverflowError):
        sigma_ibeta(ctx, a.power(10))


def test_beta_must_be_positive(bos):
    with pytest.raises(ValueError):
        ThermalContext(bos, 0.0)


def test_parity_split(gr):
    a = random_operator(gr, np.random.default_rng(2))
    even, odd = split_parity(a)
    assert (even + odd).defect(a) <= 1e-15
    assert degree(even) == 0 and degree(odd) == 1
    assert graded(odd).defect(-odd) == 0.0
    with pytest.raises(ParityError):
        degree(a)


@pytest.mark.parametrize("beta", [0.5, 2.0])
def test_super_kms(gr, beta):
    Q = supercharge(gr)
    ctx = ThermalContext(gr, beta)
    rng = np.random.default_rng(5)
    for kind_a in ("even", "odd"):
        for kind_b in ("even", "odd"):
            a = random_operator(gr, rng, kind=kind_a)
            b = random_operator(gr, rng, kind=kind_b)
            assert abs(skms(ctx, super_d(Q, a))) <= TOL
            assert twisted_kms_defect(ctx, a, b) <= TOL


def test_skms_of_identity_is_witten_sum(gr):
    ctx = ThermalContext(gr, 1.0)
    assert skms(ctx, identity(gr)).real == pytest.approx(ctx.StrZ)


def test_d_squared_is_commutator_with_H_on_protected_block(gr):
    Q = supercharge(gr)
    H = hamiltonian(gr)
    rng = np.random.default_rng(9)
    # Q^2 = H fails where a boson would pass the cutoff; an operator supported
    # on states with at most 2 bosons per mode stays two raisings clear of it
    inner = FockSpace.occupancy_cut(SYS, 2, M=2, statistics="graded")
    sel = np.array([gr.index(o) for o in inner.occ])
    for kind in ("even", "odd"):
        dense = random_operator(gr, rng, nnz=400, kind=kind).toarray()
        small = np.zeros_like(dense)
        small[np.ix_(sel, sel)] = dense[np.ix_(sel, sel)]
        a = SparseOperator(gr, small)
        lhs = super_d(Q, super_d(Q, a))
        assert lhs.defect(commutator(H, a)) <= TOL


def test_witten_index():
    K, M, beta = 2, 40, 1.0
    s = FockSpace.occupancy_cut(SYS, K, M=M, statistics="graded")
    idx = witten_index(ThermalContext(s, beta))
    assert abs(idx - 1) <= 2 * K * math.exp(-beta * SYS.omegas[0] * (M + 1))


def test_witten_product_matches_basis_sum():
    s = FockSpace.occupancy_cut(SYS, 2, M=6, statistics="graded")
    ctx = ThermalContext(s, 0.7)
    Z, StrZ = ctx.mode_factors()
    assert Z == pytest.approx(ctx.Z, rel=1e-12)
    assert StrZ == pytest.approx(ctx.StrZ, rel=1e-10)


@pytest.mark.parametrize(
    "space",
    [
        FockSpace.occupancy_cut(explicit([1.0]), 1, statistics="fermion"),
        FockSpace.occupancy_cut(explicit([1.0]), 1, M=3, statistics="graded"),
        FockSpace.occupancy_cut(explicit([1.0, 2.3]), 2, statistics="fermion"),
    ],
    ids=["d2", "d8", "d4"],
)
def test_nullspace_is_one_dimensional(space):
    assert pre_skms_nullspace(space, 1.0) == 1


def test_nullspace_dimension_cap():
    s = FockSpace.occupancy_cut(SYS, 2, M=4, statistics="graded")
    with pytest.raises(ValueError):
        pre_skms_nullspace(s, 1.0)


def test_random_operator_kind(gr):
    with pytest.raises(ValueError):
        random_operator(gr, np.random.default_rng(0), kind="mixed")
