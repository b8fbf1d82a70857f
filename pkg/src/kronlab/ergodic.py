"""Microcanonical averages tau_E, the classical limit, and time averages.

``tau_E(a)`` is the normalized diagonal sum over the energy-cut basis. When
an observable is a product of Toeplitz operators its diagonal at energy
``E`` involves intermediate states above ``E``; those are kept exact by
building the space at ``E + pad`` and averaging only over states ``<= E``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .apalgebra import TrigPolynomial, bohr_mean
from .counting import tie_tolerance
from .fock import FockSpace, SparseOperator, identity, shift, toeplitz
from .frequencies import FrequencySystem


def tau_E(space: FockSpace, a: SparseOperator, E: float | None = None) -> complex:
    """``(1/N(E)) sum_{energy(eta) <= E} (e(eta), a e(eta))``.

    ``E`` defaults to the cut of an energy-cut space; a smaller ``E`` averages
    over the corresponding subset of a padded space.
    """
    if a.space is not space:
        raise ValueError("operator does not act on this space")
    if E is None:
        if space.truncation.kind != "energy":
            raise ValueError("tau_E needs an energy-cut space or an explicit E")
        E = space.truncation.value
    mask = space.energies <= E + tie_tolerance(E)
    n = int(mask.sum())
    if n == 0:
        raise ValueError(f"no states with energy <= {E}")
    return complex(a.diagonal()[mask].sum() / n)


def pad(f: TrigPolynomial) -> float:
    """Largest energy a Toeplitz term of ``f`` can add to a state."""
    om = f.sys.omegas
    return max((sum(n * om[m] for m, n in idx if n > 0) for idx in f.terms), default=0.0)


@dataclass
class Observable:
    """Builds an operator on a given space, with its predicted classical limit.

    ``pad`` is the extra energy the space needs above ``E`` for the diagonal
    at ``E`` to be computed without truncation error.
    """

    label: str
    build: Callable[[FockSpace], SparseOperator]
    limit: complex
    pad: float = 0.0


def identity_observable() -> Observable:
    return Observable("I", identity, 1.0)


def toeplitz_observable(f: TrigPolynomial, label: str = "T(f)") -> Observable:
    return Observable(label, lambda s: toeplitz(s, f), bohr_mean(f), 0.0)


def semicommutator_observable(f: TrigPolynomial, g: TrigPolynomial) -> Observable:
    """``T(f)T(g) - T(fg)``; its classical value is zero."""
    return Observable(
        "T(f)T(g)-T(fg)",
        lambda s: toeplitz(s, f) @ toeplitz(s, g) - toeplitz(s, f * g),
        0.0,
        pad(g),
    )


def vacuum_projector_observable(mode: int) -> Observable:
    """``I - u u*``, the rank-one-per-mode projector onto ``n_mode = 0``."""

    def build(s):
        u = shift(s, mode)
        return identity(s) - u @ u.H

    return Observable(f"I-uu*[{mode}]", build, 0.0, 0.0)


@dataclass
class ErgodicReport:
    label: str
    E: list[float]
    N: list[int]
    values: list[complex]
    limit: complex
    extra: dict = field(default_factory=dict)

    def rows(self):
        for E, N, v in zip(self.E, self.N, self.values):
            yield [repr(float(E)), N, repr(v.real), repr(v.imag), repr(complex(self.limit).real)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["E", "N", "re_tau_E", "im_tau_E", "predicted_limit"])
        w.writerows(self.rows())
        return buf.getvalue()


def energy_space(sys: FrequencySystem, E: float) -> FockSpace:
    """Energy-cut space over every mode that fits, extending ``sys`` if needed."""
    return FockSpace.energy_cut(sys.extend_beyond(E), E)


def classical_limit_table(sys: FrequencySystem, observable: Observable, E_grid) -> ErgodicReport:
    """``tau_E(observable)`` along ``E_grid`` next to its predicted limit."""
    Es = [float(E) for E in E_grid]
    vals, Ns = [], []
    for E in Es:
        space = energy_space(sys, E + observable.pad)
        a = observable.build(space)
        vals.append(tau_E(space, a, E))
        Ns.append(int(np.sum(space.energies <= E + tie_tolerance(E))))
    return ErgodicReport(observable.label, Es, Ns, vals, observable.limit)


def time_average(a: SparseOperator, M: float) -> SparseOperator:
    """``(1/M) int_0^M U(t) a U(-t) dt`` in closed form.

    Entry ``(r, c)`` is scaled by ``(exp(i M d) - 1) / (i M d)`` with
    ``d = E_r - E_c``; entries with ``d`` inside the tie tolerance keep
    factor 1.
    """
    if M <= 0:
        raise ValueError("averaging time must be positive")
    coo = a.mat.tocoo()
    en = a.space.energies
    d = en[coo.row] - en[coo.col]
    tol = tie_tolerance(float(np.max(np.abs(en))) if len(en) else 1.0)
    fac = np.ones(len(d), dtype=complex)
    off = np.abs(d) > tol
    fac[off] = np.expm1(1j * M * d[off]) / (1j * M * d[off])
    mat = sp.csr_matrix((coo.data * fac, (coo.row, coo.col)), shape=a.mat.shape)
    return SparseOperator(a.space, mat)


def ergodic_defect(space: FockSpace, a: SparseOperator, limit: complex, M: float, E: float) -> float:
    """``tau_E(A* A)`` with ``A = time_average(a, M) - limit I``."""
    A = time_average(a, M) - limit * identity(space)
    return float(tau_E(space, A.H @ A, E).real)


def ergodic_table(sys: FrequencySystem, f: TrigPolynomial, E_grid, M_grid, power: int = 1) -> dict:
    """``tau_E(A* A)`` for ``a = T(f)^power`` on every ``(E, M)`` pair.

    The predicted limit ``tau(a)`` is the Bohr mean of ``f^power``.
    """
    fp = TrigPolynomial.constant(sys, 1.0)
    for _ in range(power):
        fp = fp * f
    limit = bohr_mean(fp)
    extra = power * pad(f)
    out = {"E": [float(E) for E in E_grid], "M": [float(M) for M in M_grid], "limit": limit, "defect": []}
    for E in out["E"]:
        space = energy_space(sys, E + extra)
        a = toeplitz(space, f).power(power)
        out["defect"].append([ergodic_defect(space, a, limit, M, E) for M in out["M"]])
    return out


def ergodic_test_function(sys, modes: int = 4, nmax: int = 2) -> TrigPolynomial:
    """Derivative of ``sum_{m < modes, 1 <= |n| <= nmax} exp(i n omega_m x)``.

    Weighting each term by its frequency gives every term the same share of
    ``M^2 tau_E(A*A)``, so the ``1/M^2`` law is not masked by one slow term.
    """
    terms = {}
    for m in range(modes):
        for n in range(1, nmax + 1):
            terms[((m, n),)] = 1.0
            terms[((m, -n),)] = 1.0
    return TrigPolynomial(sys, terms).derivative()


def ergodic_constant(f: TrigPolynomial) -> float:
    """``4 sum |f_eta|^2 / eta^2``, the large-E bound on ``M^2 tau_E(A*A)``."""
    return 4.0 * sum(abs(c) ** 2 / w**2 for w, c in zip(f.frequencies().values(), f.terms.values()) if w != 0)
