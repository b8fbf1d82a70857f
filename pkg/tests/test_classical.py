import numpy as np
import pytest
from oracles import finite_difference

from kronlab.apalgebra import evaluate
from kronlab.classical import (
    ClassicalField,
    LinearObservable,
    action_energy,
    action_observable,
    energy,
    evolve,
    fields_from_action,
    from_action,
    poisson,
    time_series_csv,
    to_action,
)
from kronlab.frequencies import generate

SYS = generate("powerlaw", 16, A=1.0, alpha=1.5)
K = 3


@pytest.fixture
def field():
    return ClassicalField.random(SYS, K, np.random.default_rng(4))


def test_random_field_is_real(field):
    assert field.is_real()
    phi, pi = evolve(field, 0.8)
    xs = np.linspace(-3, 3, 7)
    assert np.max(np.abs(np.imag(evaluate(phi, xs)))) < 1e-13
    assert np.max(np.abs(np.imag(evaluate(pi, xs)))) < 1e-13


def test_action_round_trip(field):
    back = from_action(SYS, K, to_action(field))
    assert np.allclose(back.phi1, field.phi1) and np.allclose(back.phi2, field.phi2)


@pytest.mark.parametrize("t", [0.0, 0.9, -2.5])
def test_fields_from_action_match_evolution(field, t):
    phi, pi = evolve(field, t)
    phi2, pi2 = fields_from_action(SYS, K, to_action(field), t)
    assert phi.allclose(phi2, atol=1e-13)
    assert pi.allclose(pi2, atol=1e-13)


def test_energy_conserved_and_equals_action_form(field):
    e0 = action_energy(field)
    for t in (0.0, 1.0, 17.3):
        assert energy(field, t) == pytest.approx(e0, rel=1e-12)


def test_zero_field():
    z = ClassicalField.zero(SYS, 2)
    assert energy(z) == 0.0 and z.is_real()


def test_wave_equation(field):
    x, t, h = 0.37, 0.6, 1e-3

    def phi_at(xx, tt):
        return float(np.real(evaluate(evolve(field, tt)[0], xx)))

    d2t = (phi_at(x, t + h) - 2 * phi_at(x, t) + phi_at(x, t - h)) / h**2
    d2x = (phi_at(x + h, t) - 2 * phi_at(x, t) + phi_at(x - h, t)) / h**2
    assert d2t - d2x == pytest.approx(0.0, abs=1e-5 * max(1.0, abs(d2t)))


def test_pi_is_time_derivative(field):
    x, t = -0.8, 0.3
    _, pi = evolve(field, t)
    fd = finite_difference(lambda tt: complex(evaluate(evolve(field, tt)[0], x)).real, t, 1e-5)
    assert complex(evaluate(pi, x)).real == pytest.approx(fd, rel=1e-7)


def test_action_observable_reads_action(field):
    a = to_action(field)
    for pos in range(2 * K):
        assert action_observable(SYS, K, pos)(field) == pytest.approx(a[pos], abs=1e-13)
        assert action_observable(SYS, K, pos, conjugate=True)(field) == pytest.approx(np.conj(a[pos]), abs=1e-13)


def test_action_brackets():
    for i in range(2 * K):
        ai = action_observable(SYS, K, i)
        for j in range(2 * K):
            abar = action_observable(SYS, K, j, conjugate=True)
            aj = action_observable(SYS, K, j)
            assert poisson(ai, abar) == pytest.approx(1.0 if i == j else 0.0, abs=1e-14)
            assert poisson(ai, aj) == pytest.approx(0.0, abs=1e-14)


def test_poisson_antisymmetric_and_field_bracket():
    rng = np.random.default_rng(7)
    A = LinearObservable(K, rng.normal(size=2 * K) + 1j * rng.normal(size=2 * K), rng.normal(size=2 * K))
    B = LinearObservable(K, rng.normal(size=2 * K), rng.normal(size=2 * K) + 1j * rng.normal(size=2 * K))
    assert poisson(A, B) == pytest.approx(-poisson(B, A))
    # phi_hat(w) and pi_hat(-w) are canonically conjugate
    for p in range(2 * K):
        ph = LinearObservable(K, np.eye(2 * K)[p], None)
        q = (p + K) % (2 * K)
        pi = LinearObservable(K, None, np.eye(2 * K)[q])
        assert poisson(ph, pi) == pytest.approx(1j)


def test_poisson_mode_mismatch():
    with pytest.raises(ValueError):
        poisson(LinearObservable(2), LinearObservable(3))


def test_bad_shapes():
    with pytest.raises(ValueError):
        ClassicalField(SYS, 2, np.zeros(3), np.zeros(4))
    with pytest.raises(ValueError):
        ClassicalField(SYS, 0, np.zeros(0), np.zeros(0))


def test_time_series_csv(field):
    text = time_series_csv(field, [0.0, 1.0], [0.0, 0.5])
    lines = text.splitlines()
    assert lines[0] == "t,energy,phi_x0,phi_x1"
    assert len(lines) == 3
    assert text == time_series_csv(field, [0.0, 1.0], [0.0, 0.5])


def test_time_additivity(field):
    from kronlab.classical import advance

    for s, t in ((0.4, 1.1), (-2.0, 0.5)):
        a = evolve(advance(field, s), t)
        b = evolve(field, s + t)
        assert a[0].allclose(b[0], atol=1e-13) and a[1].allclose(b[1], atol=1e-13)


def test_linearity(field):
    other = ClassicalField.random(SYS, K, np.random.default_rng(8))
    both = ClassicalField(SYS, K, field.phi1 + 2 * other.phi1, field.phi2 + 2 * other.phi2)
    lhs = evolve(both, 0.7)[0]
    rhs = evolve(field, 0.7)[0] + 2 * evolve(other, 0.7)[0]
    assert lhs.allclose(rhs, atol=1e-13)


def test_energy_nonnegative(field):
    rng = np.random.default_rng(1)
    for _ in range(10):
        assert energy(ClassicalField.random(SYS, K, rng)) > 0
