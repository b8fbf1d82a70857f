import math

import numpy as np
import pytest
from scipy import special

from kronlab.specfun import gamma, gamma_zeta, zeta


@pytest.mark.parametrize("x", np.linspace(0.6, 6.0, 28))
def test_gamma_against_scipy(x):
    assert gamma(x) == pytest.approx(special.gamma(x), rel=1e-13)


def test_gamma_reflection_and_poles():
    assert gamma(-0.5) == pytest.approx(special.gamma(-0.5), rel=1e-13)
    for bad in (0.0, -1.0, -3.0):
        with pytest.raises(ValueError):
            gamma(bad)


@pytest.mark.parametrize("b", np.linspace(1.0, 3.0, 21))
def test_gamma_functional_equation(b):
    assert gamma(b + 1) == pytest.approx(b * gamma(b), rel=1e-11)


@pytest.mark.parametrize("s", [1.01, 1.1, 1.5, 1.6667, 2.0, 3.0, 7.5, 20.0])
def test_zeta_against_scipy(s):
    assert zeta(s) == pytest.approx(special.zeta(s), rel=1e-13)


def test_known_values():
    g, z = gamma_zeta(2.0)
    assert g == pytest.approx(1.0, abs=1e-14)
    assert z == pytest.approx(math.pi**2 / 6, rel=1e-14)
    assert abs(zeta(3.0) - 1.2020569031595942) < 1e-12


def test_domain_errors():
    with pytest.raises(ValueError):
        zeta(1.0)
    with pytest.raises(ValueError):
        gamma_zeta(0.9)
