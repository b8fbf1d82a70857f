import cmath
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kronlab.apalgebra import (
    TrigPolynomial,
    bohr_mean,
    delta_truncated,
    evaluate,
    kronecker_flow,
    make_index,
    multiply,
    project,
)
from kronlab.frequencies import generate

SYS = generate("dispersion", 6, m=np.pi)

coef = st.complex_numbers(max_magnitude=5.0, allow_nan=False, allow_infinity=False)
index = st.dictionaries(st.integers(0, 5), st.integers(-3, 3), max_size=3)
poly = st.lists(st.tuples(index, coef), max_size=5).map(
    lambda terms: TrigPolynomial(SYS, {make_index(i): c for i, c in terms})
)


def mono(entries, c=1.0):
    return TrigPolynomial.monomial(SYS, entries, c)


def test_bohr_mean_examples():
    assert bohr_mean(TrigPolynomial.constant(SYS)) == 1
    assert bohr_mean(mono({0: 1})) == 0
    f = TrigPolynomial(SYS, {(): 3, ((0, 1),): 2, ((0, -1),): 2})
    assert bohr_mean(f) == 3


def test_multiply_examples():
    assert multiply(mono({0: 1}), mono({0: -1})) == TrigPolynomial.constant(SYS)
    f = TrigPolynomial.constant(SYS) + mono({0: 1})
    assert (f * f).allclose(TrigPolynomial(SYS, {(): 1, ((0, 1),): 2, ((0, 2),): 1}))


def test_mismatched_systems():
    other = generate("dispersion", 6, m=2.0)
    with pytest.raises(ValueError):
        multiply(mono({0: 1}), TrigPolynomial.monomial(other, {0: 1}))


@given(poly)
@settings(max_examples=60, deadline=None)
def test_parseval_against_pair_expansion(f):
    # hand oracle: the zero-frequency part of f * conj(f) collects f_eta * conj(f_eta)
    expected = sum(abs(c) ** 2 for c in f.terms.values())
    assert abs(bohr_mean(f * f.conj()) - expected) <= 1e-12 * max(1.0, expected)


@given(poly, poly, poly)
@settings(max_examples=40, deadline=None)
def test_commutative_associative(f, g, h):
    assert (f * g).allclose(g * f, 1e-12 * max(1.0, f.l1_norm() * g.l1_norm()))
    scale = max(1.0, f.l1_norm() * g.l1_norm() * h.l1_norm())
    assert ((f * g) * h).allclose(f * (g * h), 1e-12 * scale)


def test_flow_examples():
    w = SYS.omegas[2]
    t = 0.7
    assert kronecker_flow(mono({2: 1}), t).allclose(mono({2: 1}, cmath.exp(1j * w * t)))
    f = TrigPolynomial(SYS, {(): 1.5, ((0, 1), (3, -2)): 2j})
    assert kronecker_flow(f, 0.0) == f


@given(poly, st.floats(-10, 10), st.floats(-10, 10))
@settings(max_examples=40, deadline=None)
def test_flow_group_law_and_mean(f, s, t):
    assert kronecker_flow(kronecker_flow(f, s), t).allclose(kronecker_flow(f, s + t), 1e-12 * max(1, f.l1_norm()))
    assert bohr_mean(kronecker_flow(f, t)) == pytest.approx(bohr_mean(f), abs=1e-15)


def test_delta_truncated():
    d1 = delta_truncated(SYS, 1)
    assert d1 == mono({0: 1}) + mono({0: -1})
    assert len(delta_truncated(SYS, 4)) == 8
    assert bohr_mean(delta_truncated(SYS, 6)) == 0
    with pytest.raises(ValueError):
        delta_truncated(SYS, 7)
    with pytest.raises(ValueError):
        delta_truncated(SYS, 0)


def test_project_keeps_single_mode_terms():
    f = TrigPolynomial(
        SYS,
        {(): 2, ((0, 1),): 1 + 1j, ((1, -1),): 3, ((0, 2),): 5, ((0, 1), (1, 1)): 7, ((4, 1),): 0.5},
    )
    expected = TrigPolynomial(SYS, {((0, 1),): 1 + 1j, ((1, -1),): 3})
    assert project(f, 3).allclose(expected)
    assert project(f).allclose(expected + TrigPolynomial(SYS, {((4, 1),): 0.5}))


def test_evaluate():
    assert evaluate(TrigPolynomial.constant(SYS), 3.3) == 1
    assert evaluate(mono({0: 1}), 0.0) == 1
    xs = np.linspace(-5, 5, 7)
    f = TrigPolynomial(SYS, {((1, 2),): 1 - 2j, ((3, -1),): 0.5})
    vals = evaluate(f, xs)
    direct = (1 - 2j) * np.exp(2j * SYS.omegas[1] * xs) + 0.5 * np.exp(-1j * SYS.omegas[3] * xs)
    assert np.allclose(vals, direct)


@given(poly, st.floats(-50, 50))
@settings(max_examples=60, deadline=None)
def test_triangle_and_hermitian(f, x):
    assert abs(evaluate(f, x)) <= f.l1_norm() + 1e-12
    h = f + f.conj()
    assert h.is_hermitian()
    assert abs(evaluate(h, x).imag) <= 1e-12 * max(1.0, h.l1_norm())


def test_pruning_and_json():
    f = TrigPolynomial(SYS, {((0, 1),): 1e-16, ((1, 1),): 1.0})
    assert len(f) == 1
    g = mono({0: 1}) - mono({0: 1})
    assert len(g) == 0
    h = TrigPolynomial(SYS, {(): 1.5, ((0, 1), (3, -2)): 2j})
    assert TrigPolynomial.from_json(SYS, json.loads(json.dumps(h.to_json()))) == h


def test_derivative():
    f = mono({1: 2}, 3.0)
    assert f.derivative().allclose(mono({1: 2}, 3.0 * 2j * SYS.omegas[1]))
