"""Classical almost periodic wave equation on the doubled frequency layout.

A solution is ``phi(x,t) = sum_w phi1_w e^{iw(x+t)} + phi2_w e^{iw(x-t)}`` over
``w = +-omega_1..+-omega_K``, with ``pi = d phi / dt``. Coefficient arrays
have length ``2K``: position ``j`` is ``+omega_j`` and ``K + j`` is
``-omega_j``. Real fields satisfy ``conj(phi1_w) = phi1_{-w}`` and likewise
for ``phi2``.

Brackets use the normalization ``{a_w, conj(a_w')} = delta``; this is
``i`` times the real canonical bracket, so that ``{phi(x), pi(y)} = i delta``
and quantization is ``[A, B] = {A, B}`` with no further factor.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .apalgebra import TrigPolynomial, bohr_mean, evaluate
from .frequencies import FrequencySystem

SQRT2 = np.sqrt(2.0)


def _flip(v: np.ndarray) -> np.ndarray:
    """Reindex ``w -> -w``."""
    K = len(v) // 2
    return np.concatenate([v[K:], v[:K]])


@dataclass
class ClassicalField:
    sys: FrequencySystem
    K: int
    phi1: np.ndarray
    phi2: np.ndarray

    def __post_init__(self):
        if not 1 <= self.K <= self.sys.count:
            raise ValueError(f"K={self.K} outside 1..{self.sys.count}")
        self.phi1 = np.asarray(self.phi1, dtype=complex).copy()
        self.phi2 = np.asarray(self.phi2, dtype=complex).copy()
        if self.phi1.shape != (2 * self.K,) or self.phi2.shape != (2 * self.K,):
            raise ValueError(f"coefficient arrays must have length {2 * self.K}")

    @property
    def freqs(self) -> np.ndarray:
        w = self.sys.omegas[: self.K]
        return np.concatenate([w, -w])

    def is_real(self, atol: float = 1e-12) -> bool:
        return bool(
            np.allclose(np.conj(self.phi1), _flip(self.phi1), atol=atol, rtol=0)
            and np.allclose(np.conj(self.phi2), _flip(self.phi2), atol=atol, rtol=0)
        )

    @classmethod
    def zero(cls, sys, K):
        return cls(sys, K, np.zeros(2 * K), np.zeros(2 * K))

    @classmethod
    def random(cls, sys, K, rng: np.random.Generator):
        """A random real field."""
        return from_action(sys, K, rng.normal(size=2 * K) + 1j * rng.normal(size=2 * K))


def _index(K: int, pos: int):
    return ((pos, 1),) if pos < K else ((pos - K, -1),)


def _poly(sys, K, coefs) -> TrigPolynomial:
    return TrigPolynomial(sys, {_index(K, p): c for p, c in enumerate(coefs)})


def evolve(f: ClassicalField, t: float) -> tuple[TrigPolynomial, TrigPolynomial]:
    """``(phi(., t), pi(., t))`` as trigonometric polynomials in ``x``."""
    w = f.freqs
    left = f.phi1 * np.exp(1j * w * t)
    right = f.phi2 * np.exp(-1j * w * t)
    return _poly(f.sys, f.K, left + right), _poly(f.sys, f.K, 1j * w * (left - right))


def advance(f: ClassicalField, t: float) -> ClassicalField:
    """The field at time ``t`` as new initial data; ``evolve(advance(f, s), t) = evolve(f, s + t)``."""
    w = f.freqs
    return ClassicalField(f.sys, f.K, f.phi1 * np.exp(1j * w * t), f.phi2 * np.exp(-1j * w * t))


def to_action(f: ClassicalField) -> np.ndarray:
    """``a_w = sqrt2 |w|^1/2 phi1_{-w}`` for ``w > 0`` and ``sqrt2 |w|^1/2 phi2_{-w}`` for ``w < 0``."""
    K = f.K
    scale = SQRT2 * np.sqrt(np.abs(f.freqs))
    a = np.empty(2 * K, dtype=complex)
    a[:K] = f.phi1[K:]
    a[K:] = f.phi2[:K]
    return scale * a


def from_action(sys: FrequencySystem, K: int, a) -> ClassicalField:
    """Inverse of :func:`to_action`; any complex ``a`` gives a real field."""
    a = np.asarray(a, dtype=complex)
    w = sys.omegas[:K]
    scale = SQRT2 * np.sqrt(w)
    phi1 = np.empty(2 * K, dtype=complex)
    phi2 = np.empty(2 * K, dtype=complex)
    phi1[K:] = a[:K] / scale
    phi1[:K] = np.conj(phi1[K:])
    phi2[:K] = a[K:] / scale
    phi2[K:] = np.conj(phi2[:K])
    return ClassicalField(sys, K, phi1, phi2)


def fields_from_action(sys: FrequencySystem, K: int, a, t: float) -> tuple[TrigPolynomial, TrigPolynomial]:
    """Rebuild ``(phi, pi)`` from action variables.

    ``phi = 2^-1/2 sum |w|^-1/2 (conj(a_w) e^{it|w|} + a_{-w} e^{-it|w|}) e^{iwx}``
    and ``pi`` carries ``i |w|^1/2`` and a minus sign on the second term.
    """
    a = np.asarray(a, dtype=complex)
    w = np.concatenate([sys.omegas[:K], -sys.omegas[:K]])
    aw = np.abs(w)
    up = np.conj(a) * np.exp(1j * t * aw)
    down = _flip(a) * np.exp(-1j * t * aw)
    phi = (up + down) / (SQRT2 * np.sqrt(aw))
    pi = 1j * np.sqrt(aw) * (up - down) / SQRT2
    return _poly(sys, K, phi), _poly(sys, K, pi)


def energy(f: ClassicalField, t: float = 0.0) -> float:
    """``(1/2) Bohr mean of pi^2 + (d phi/dx)^2``."""
    phi, pi = evolve(f, t)
    dphi = phi.derivative()
    return float((0.5 * bohr_mean(pi * pi + dphi * dphi)).real)


def action_energy(f: ClassicalField) -> float:
    """``sum_w |w| |a_w|^2``."""
    return float(np.sum(np.abs(f.freqs) * np.abs(to_action(f)) ** 2))


@dataclass
class LinearObservable:
    """``A = sum_w c_phi[w] phi_hat(w) + c_pi[w] pi_hat(w)`` on Fourier coefficients at t = 0.

    ``phi_hat(w)`` is the Bohr mean of ``phi(x) e^{-iwx}``.
    """

    K: int
    c_phi: np.ndarray = field(default=None)
    c_pi: np.ndarray = field(default=None)

    def __post_init__(self):
        n = 2 * self.K
        self.c_phi = np.zeros(n, complex) if self.c_phi is None else np.asarray(self.c_phi, complex)
        self.c_pi = np.zeros(n, complex) if self.c_pi is None else np.asarray(self.c_pi, complex)

    def __call__(self, f: ClassicalField) -> complex:
        w = f.freqs
        phi_hat = f.phi1 + f.phi2
        pi_hat = 1j * w * (f.phi1 - f.phi2)
        return complex(self.c_phi @ phi_hat + self.c_pi @ pi_hat)


def action_observable(sys: FrequencySystem, K: int, pos: int, conjugate: bool = False) -> LinearObservable:
    """``a_w`` (or ``conj(a_w)``) for the layout position ``pos``.

    ``a_w = (|w|/2)^1/2 (phi_hat(-w) + i pi_hat(-w)/|w|)``.
    """
    w = np.concatenate([sys.omegas[:K], -sys.omegas[:K]])
    aw = abs(w[pos])
    s = np.sqrt(aw / 2.0)
    target = pos if conjugate else (pos + K) % (2 * K)
    c_phi = np.zeros(2 * K, complex)
    c_pi = np.zeros(2 * K, complex)
    c_phi[target] = s
    c_pi[target] = (-1j if conjugate else 1j) * s / aw
    return LinearObservable(K, c_phi, c_pi)


def poisson(A: LinearObservable, B: LinearObservable) -> complex:
    """``{A, B} = i sum_w (A.c_phi[w] B.c_pi[-w] - A.c_pi[w] B.c_phi[-w])``."""
    if A.K != B.K:
        raise ValueError("observables on different mode counts")
    return complex(1j * (A.c_phi @ _flip(B.c_pi) - A.c_pi @ _flip(B.c_phi)))


def time_series_csv(f: ClassicalField, times, xs) -> str:
    """CSV rows ``t, energy, phi(x_0), ...`` (real parts)."""
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["t", "energy"] + [f"phi_x{i}" for i in range(len(xs))])
    for t in times:
        phi, _ = evolve(f, float(t))
        vals = np.real(evaluate(phi, np.asarray(xs, dtype=float)))
        wr.writerow([repr(float(t)), repr(energy(f, float(t)))] + [repr(float(v)) for v in np.atleast_1d(vals)])
    return buf.getvalue()
