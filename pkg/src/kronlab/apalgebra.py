"""Finite trigonometric polynomials with frequencies in the lattice Z[Omega_+].

A frequency is stored as an exact integer multi-index over mode positions,
never as a float sum, so products and the flow stay exact. An index is a
sorted tuple of ``(mode, n)`` pairs with ``n != 0``; the empty tuple is the
zero frequency.
"""

from __future__ import annotations

import cmath
from collections import defaultdict
from typing import Iterable, Mapping

import numpy as np

from .frequencies import FrequencySystem

PRUNE = 1e-15

Index = tuple[tuple[int, int], ...]
ZERO: Index = ()


def make_index(entries: Mapping[int, int] | Iterable[tuple[int, int]]) -> Index:
    """Canonical index from a ``{mode: n}`` map or pairs; zero entries dropped."""
    items = entries.items() if isinstance(entries, Mapping) else entries
    acc: dict[int, int] = defaultdict(int)
    for mode, n in items:
        if int(mode) < 0:
            raise ValueError(f"negative mode position {mode}")
        acc[int(mode)] += int(n)
    return tuple(sorted((m, n) for m, n in acc.items() if n != 0))


def add_index(a: Index, b: Index) -> Index:
    if not a:
        return b
    if not b:
        return a
    return make_index(list(a) + list(b))


def neg_index(a: Index) -> Index:
    return tuple((m, -n) for m, n in a)


def index_value(index: Index, omegas: np.ndarray) -> float:
    return float(sum(n * omegas[m] for m, n in index))


class TrigPolynomial:
    """Finitely supported Fourier series ``sum_eta f_eta exp(i eta x)``.

    Treated as an immutable value; all operations return new polynomials.
    """

    __slots__ = ("sys", "terms")

    def __init__(self, sys: FrequencySystem, terms: Mapping[Index, complex] | None = None):
        self.sys = sys
        clean = {}
        for idx, c in (terms or {}).items():
            c = complex(c)
            if abs(c) > PRUNE:
                idx = make_index(idx)
                for m, _ in idx:
                    if m >= sys.count:
                        raise ValueError(f"mode {m} not materialized (count={sys.count})")
                clean[idx] = clean.get(idx, 0.0) + c
        self.terms: dict[Index, complex] = {k: v for k, v in clean.items() if abs(v) > PRUNE}

    @classmethod
    def constant(cls, sys, c=1.0):
        return cls(sys, {ZERO: c})

    @classmethod
    def monomial(cls, sys, entries, c=1.0):
        """``c * exp(i (sum_k n_k omega_k) x)`` for ``entries = {k: n_k}``."""
        return cls(sys, {make_index(entries): c})

    def __repr__(self):
        parts = [f"{c:.4g}*e{dict(idx)}" for idx, c in sorted(self.terms.items())]
        return "TrigPolynomial(" + " + ".join(parts or ["0"]) + ")"

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def coefficient(self, index) -> complex:
        return self.terms.get(make_index(index), 0.0)

    def modes(self) -> set[int]:
        return {m for idx in self.terms for m, _ in idx}

    def _check(self, other: "TrigPolynomial"):
        if self.sys is not other.sys and self.sys != other.sys:
            raise ValueError("polynomials live on different frequency systems")

    def __add__(self, other):
        if not isinstance(other, TrigPolynomial):
            other = TrigPolynomial.constant(self.sys, other)
        self._check(other)
        out = dict(self.terms)
        for idx, c in other.terms.items():
            out[idx] = out.get(idx, 0.0) + c
        return TrigPolynomial(self.sys, out)

    __radd__ = __add__

    def __neg__(self):
        return TrigPolynomial(self.sys, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TrigPolynomial):
            return multiply(self, other)
        return TrigPolynomial(self.sys, {k: other * v for k, v in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        return self.sys == other.sys and self.terms == other.terms

    def allclose(self, other: "TrigPolynomial", atol: float = 1e-12) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0) - other.terms.get(k, 0)) <= atol for k in keys)

    def conj(self) -> "TrigPolynomial":
        """Pointwise complex conjugate: ``f_eta -> conj(f_{-eta})``."""
        return TrigPolynomial(self.sys, {neg_index(k): v.conjugate() for k, v in self.terms.items()})

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        """True when the function is real valued."""
        return self.allclose(self.conj(), atol)

    def l1_norm(self) -> float:
        return float(sum(abs(c) for c in self.terms.values()))

    def frequencies(self) -> dict[Index, float]:
        return {idx: index_value(idx, self.sys.omegas) for idx in self.terms}

    def derivative(self) -> "TrigPolynomial":
        """``d/dx``: multiplies each coefficient by ``i * eta``."""
        om = self.sys.omegas
        return TrigPolynomial(self.sys, {k: 1j * index_value(k, om) * v for k, v in self.terms.items()})

    def to_json(self) -> list[dict]:
        return [
            {"index": {str(m): n for m, n in idx}, "re": c.real, "im": c.imag}
            for idx, c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, sys: FrequencySystem, data: list[dict]) -> "TrigPolynomial":
        terms: dict[Index, complex] = {}
        for term in data:
            idx = make_index({int(m): int(n) for m, n in term["index"].items()})
            terms[idx] = terms.get(idx, 0.0) + complex(term["re"], term["im"])
        return cls(sys, terms)


def bohr_mean(f: TrigPolynomial) -> complex:
    """Almost periodic mean: the zero-frequency coefficient."""
    return f.terms.get(ZERO, 0.0)


def multiply(f: TrigPolynomial, g: TrigPolynomial) -> TrigPolynomial:
    f._check(g)
    out: dict[Index, complex] = defaultdict(complex)
    for i, a in f.terms.items():
        for j, b in g.terms.items():
            out[add_index(i, j)] += a * b
    return TrigPolynomial(f.sys, out)


def kronecker_flow(f: TrigPolynomial, t: float) -> TrigPolynomial:
    """Translate along the Kronecker flow: ``f_eta -> exp(i t eta) f_eta``."""
    om = f.sys.omegas
    return TrigPolynomial(f.sys, {k: cmath.exp(1j * t * index_value(k, om)) * v for k, v in f.terms.items()})


def delta_truncated(sys: FrequencySystem, K: int) -> TrigPolynomial:
    """``sum over +-omega_1..+-omega_K of exp(i omega x)``."""
    if not 1 <= K <= sys.count:
        raise ValueError(f"K={K} outside 1..{sys.count}")
    terms = {}
    for m in range(K):
        terms[((m, 1),)] = 1.0
        terms[((m, -1),)] = 1.0
    return TrigPolynomial(sys, terms)


def project(f: TrigPolynomial, K: int | None = None) -> TrigPolynomial:
    """Mean-convolution with the truncated delta: ``y -> mean_x delta_K(y - x) f(x)``.

    Computed by the literal convolution, so it keeps exactly the
    single-mode ``+-omega`` terms of ``f`` on the first ``K`` modes.
    """
    K = f.sys.count if K is None else K
    delta = delta_truncated(f.sys, K)
    out: dict[Index, complex] = defaultdict(complex)
    # delta(y - x) = sum_w e^{iwy} e^{-iwx}; the x-mean of e^{-iwx} f(x) picks f_w
    for w, dw in delta.terms.items():
        out[w] += dw * bohr_mean(TrigPolynomial.monomial(f.sys, dict(neg_index(w))) * f)
    return TrigPolynomial(f.sys, out)


def evaluate(f: TrigPolynomial, x):
    """Pointwise value(s) at real ``x`` (scalar or array)."""
    x = np.asarray(x, dtype=float)
    if not f.terms:
        return np.zeros(x.shape, dtype=complex)[()]
    om = f.sys.omegas
    freqs = np.array([index_value(k, om) for k in f.terms])
    coefs = np.array(list(f.terms.values()), dtype=complex)
    out = np.exp(1j * np.multiply.outer(x, freqs)) @ coefs
    return out[()]
