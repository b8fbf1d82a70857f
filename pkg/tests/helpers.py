"""Shared random inputs for the tests."""

import numpy as np

from kronlab.apalgebra import TrigPolynomial


def random_poly(sys, rng: np.random.Generator, modes: int = 3, nmax: int = 2, terms: int = 6) -> TrigPolynomial:
    """Random complex trig polynomial with a constant term and ``terms`` monomials."""
    out = {(): complex(rng.normal(), rng.normal())}
    while len(out) < terms + 1:
        k = int(rng.integers(1, 3))
        ms = sorted(rng.choice(modes, size=k, replace=False).tolist())
        idx = tuple((m, int(n)) for m, n in zip(ms, rng.choice([n for n in range(-nmax, nmax + 1) if n], size=k)))
        out[idx] = complex(rng.normal(), rng.normal())
    return TrigPolynomial(sys, out)
