import math

import numpy as np
import pytest
from oracles import finite_difference, phi_direct

from kronlab.frequencies import explicit, generate
from kronlab.tauber import (
    DivergentSeriesError,
    PhiEvaluator,
    asymptotic_ratio,
    asymptotic_vs_exact,
    check_alpha,
    check_beta,
    check_gamma,
    h_asymptotic,
    im_phi_prime,
    n_tilde_shift_ratio,
    phi,
    phi_derivatives,
    powerlaw_constant,
    solve_saddle,
    theta,
)

P1 = generate("powerlaw", 64, A=1.0, alpha=1.0)
P2 = generate("powerlaw", 64, A=1.0, alpha=2.0)
P15 = generate("powerlaw", 64, A=1.0, alpha=1.5)
SIGMAS = [2.0**-k for k in range(1, 13)]


def test_single_mode_closed_forms():
    w, s = 1.3, 0.7
    one = explicit([w])
    assert phi(one, s) == pytest.approx(-math.log1p(-math.exp(-s * w)), rel=1e-14)
    assert theta(one, s) == pytest.approx(math.exp(-s * w), rel=1e-14)


@pytest.mark.parametrize("sys,s", [(P1, 0.3), (P15, 0.05), (P2, 0.01)])
def test_phi_against_direct_sum(sys, s):
    n = np.arange(1, 200000, dtype=float)
    om = sys.params["A"] * n ** sys.params["alpha"]
    assert phi(sys, s) == pytest.approx(phi_direct(om[om * s < 60], s), rel=1e-11)


def test_integer_phi_closed_form():
    # sum log(1 - q^n) converges fast enough at q = e^-1 to serve as its own oracle
    s = 1.0
    ref = -math.fsum(math.log1p(-math.exp(-s * n)) for n in range(1, 200))
    assert phi(P1, s) == pytest.approx(ref, rel=1e-14)


@pytest.mark.parametrize("s", [0.02, 0.2, 2.0])
def test_derivatives_by_finite_differences(s):
    p0, p1, p2, p3 = phi_derivatives(P15, s)
    h = s * 1e-4
    assert p1 == pytest.approx(finite_difference(lambda t: phi(P15, t), s, h), rel=1e-6)
    assert p2 == pytest.approx(finite_difference(lambda t: phi_derivatives(P15, t)[1], s, h), rel=1e-6)
    assert p3 == pytest.approx(finite_difference(lambda t: phi_derivatives(P15, t)[2], s, h), rel=1e-6)
    assert p0 > 0 and p1 < 0 and p2 > 0 and p3 < 0


def test_divergent_regime():
    with pytest.raises((DivergentSeriesError, ValueError)):
        phi(P1, 0.0)
    with pytest.raises((DivergentSeriesError, ValueError)):
        phi(P1, -1.0)


@pytest.mark.parametrize("E", [5.0, 50.0, 500.0])
def test_saddle_residual(E):
    r = solve_saddle(P15, E)
    assert r.residual <= 1e-10 * E
    assert r.sigma > 0 and math.isfinite(r.log_N_tilde)


def test_saddle_shrinks_with_E():
    s = [solve_saddle(P1, E).sigma for E in (10, 100, 1000, 10000)]
    assert all(a > b for a, b in zip(s, s[1:]))


def test_saddle_rejects_nonpositive_E():
    with pytest.raises(ValueError):
        solve_saddle(P1, 0.0)


def test_log_space_beyond_overflow():
    r = solve_saddle(P1, 1e6)
    assert r.log_N_tilde > 709 and r.N_tilde == math.inf


@pytest.mark.parametrize("c", [0.5, 1.0, -1.0])
def test_shift_ratio_tends_to_exp_c(c):
    d = [abs(n_tilde_shift_ratio(P15, E, c) - math.exp(c)) for E in (10, 100, 1000, 10000, 100000)]
    assert all(a > b for a, b in zip(d, d[1:]))
    assert d[-1] < 0.02 * math.exp(c)


def test_constant_shift_ratio_tends_to_one():
    ev = PhiEvaluator(P15)
    d = []
    for E in (10, 100, 1000, 10000):
        a, b = solve_saddle(ev, E), solve_saddle(ev, E + 1.0)
        d.append(abs(math.exp(b.log_N_tilde - a.log_N_tilde) - 1))
    assert all(x > y for x, y in zip(d, d[1:]))
    assert d[-1] < 0.05


def test_asymptotic_vs_exact_columns():
    rows = asymptotic_vs_exact(P1, [20, 40])
    assert [r.N_exact for r in rows] == [2714, 215308]
    for r in rows:
        assert r.ratio == pytest.approx(r.N_exact / r.N_tilde)


def test_check_alpha_and_beta_pass_on_powerlaws():
    for s in (P1, P2):
        assert check_alpha(s, SIGMAS).passed
        assert check_beta(s, SIGMAS).passed


def test_check_alpha_negative_control():
    rep = check_alpha(explicit([1.0]), SIGMAS)
    assert not rep.passed
    # -sigma phi' = sigma w / (e^{sigma w} - 1) stays below 1
    assert max(rep.values["-sigma*phi1"]) < 1.0


def test_im_phi_prime_odd_and_zero_at_origin():
    assert im_phi_prime(P1, 0.1, 0.0) == 0.0
    a, b = im_phi_prime(P1, 0.1, 1.3), im_phi_prime(P1, 0.1, -1.3)
    assert a == pytest.approx(-b, rel=1e-13)


def test_h_at_zero():
    assert h_asymptotic(0.0, 2.0) == 2.0
    assert h_asymptotic(1e-9, 1.5) == pytest.approx(1.5, rel=1e-12)


def test_powerlaw_constant():
    beta, C = powerlaw_constant(1.0, 1.0)
    assert beta == 2.0 and C == pytest.approx(math.pi**2 / 6, rel=1e-14)


def test_asymptotic_ratio_converges():
    assert abs(asymptotic_ratio(P1, 1e-3, 1.0) - 1) < 0.05
    d = [abs(asymptotic_ratio(P1, s, 1.0) - 1) for s in (1e-1, 1e-2, 1e-3)]
    assert d[0] > d[1] > d[2]


@pytest.mark.parametrize("sys", [P1, P2], ids=["alpha1", "alpha2"])
def test_gamma_zero_free_below_one_half(sys):
    # the literal grid includes sigma = 1/2, where Im phi' has genuine zeros;
    # below it the triangle is clean, which is the existence form of the assumption
    rep = check_gamma(sys, 4.0, SIGMAS, sigma0=0.5)
    assert rep.passed, rep.note


@pytest.mark.parametrize("sys,where", [(P1, [3.44]), (P2, [2.35, 2.69])], ids=["alpha1", "alpha2"])
def test_gamma_reports_the_half_zeros(sys, where):
    rep = check_gamma(sys, 4.0, SIGMAS)
    assert not rep.passed
    zs = rep.values["zeros"]
    assert {z[0] for z in zs} == {0.5}
    for x in where:
        assert any(lo - 0.07 <= x <= hi + 0.07 for _, lo, hi in zs)
    assert rep.values["sigma0"] == 0.5


def test_gamma_zero_located_by_root_finding():
    from scipy.optimize import brentq

    x0 = brentq(lambda x: im_phi_prime(P1, 0.5, x), 3.3, 3.6)
    assert abs(im_phi_prime(P1, 0.5, x0)) < 1e-10


def test_evaluator_reuse():
    ev = PhiEvaluator(P15)
    assert ev.phi(0.1) == phi(P15, 0.1)
