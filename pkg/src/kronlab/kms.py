"""Gibbs and super-KMS functionals on truncated Fock spaces.

The Hamiltonian is always diagonal here, so the modular shift
``sigma_{i beta}(a) = exp(-beta H) a exp(beta H)`` is an entrywise factor
``exp(-beta (E_r - E_c))`` and Boltzmann weights are computed from
nonnegative energies (no overflow; underflow to zero is harmless).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fock import FockSpace, SparseOperator, parity

OVERFLOW_EXPONENT = 700.0
NULLSPACE_MAX_DIM = 16
RANK_TOL = 1e-10


class ParityError(ValueError):
    """Operator is neither even nor odd under the grading."""


@dataclass
class ThermalContext:
    """Inverse temperature and Boltzmann weights on a fixed space."""

    space: FockSpace
    beta: float

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        en = self.space.energies
        self.log_weights = -self.beta * (en - en.min())
        self.weights = np.exp(self.log_weights)
        self.parity = parity(self.space)
        self.Z = float(self.weights.sum())
        self.StrZ = float((self.parity * self.weights).sum())

    @property
    def energies(self) -> np.ndarray:
        return self.space.energies

    def mode_factors(self) -> tuple[float, float]:
        """``(Z, StrZ)`` as per-mode products on an occupancy-cut space."""
        s = self.space
        if s.truncation.kind != "occupancy":
            raise ValueError("per-mode products need an occupancy-cut space")
        M = int(s.truncation.value)
        Z = StrZ = 1.0
        for w in np.abs(s.boson_freqs):
            f = math.expm1(-self.beta * w * (M + 1)) / math.expm1(-self.beta * w)
            Z *= f
            StrZ *= f
        for w in np.abs(s.fermion_freqs):
            x = math.exp(-self.beta * w)
            Z *= 1.0 + x
            StrZ *= -math.expm1(-self.beta * w)
        return Z, StrZ


def _shared(ctx: ThermalContext, *ops: SparseOperator):
    for op in ops:
        if op.space is not ctx.space:
            raise ValueError("operator does not act on the context's space")


def gibbs(ctx: ThermalContext, a: SparseOperator) -> complex:
    """``tr(a exp(-beta H)) / Z``."""
    _shared(ctx, a)
    return complex(np.dot(a.diagonal(), ctx.weights) / ctx.Z)


def sigma_ibeta(ctx: ThermalContext, a: SparseOperator) -> SparseOperator:
    """``exp(-beta H) a exp(beta H)``, entrywise."""
    _shared(ctx, a)
    coo = a.mat.tocoo()
    expo = ctx.log_weights[coo.row] - ctx.log_weights[coo.col]
    if expo.size and expo.max() > OVERFLOW_EXPONENT:
        raise OverflowError(
            f"beta * energy gap reaches {expo.max():.1f} > {OVERFLOW_EXPONENT}; lower beta or the cut"
        )
    mat = sp.csr_matrix((coo.data * np.exp(expo), (coo.row, coo.col)), shape=a.mat.shape)
    return SparseOperator(a.space, mat)


def kms_check(ctx: ThermalContext, a: SparseOperator, b: SparseOperator) -> float:
    """``|gibbs(ab) - gibbs(b sigma_{i beta}(a))|``."""
    return abs(gibbs(ctx, a @ b) - gibbs(ctx, b @ sigma_ibeta(ctx, a)))


def graded(a: SparseOperator) -> SparseOperator:
    """``a^Gamma = Gamma a Gamma``."""
    p = parity(a.space)
    coo = a.mat.tocoo()
    mat = sp.csr_matrix((coo.data * p[coo.row] * p[coo.col], (coo.row, coo.col)), shape=a.mat.shape)
    return SparseOperator(a.space, mat)


def split_parity(a: SparseOperator) -> tuple[SparseOperator, SparseOperator]:
    """``((a + a^Gamma)/2, (a - a^Gamma)/2)``."""
    g = graded(a)
    return (a + g) * 0.5, (a - g) * 0.5


def degree(a: SparseOperator, atol: float = 0.0) -> int:
    """0 for even, 1 for odd; raises :class:`ParityError` otherwise."""
    g = graded(a)
    if a.defect(g) <= atol:
        return 0
    if a.defect(-g) <= atol:
        return 1
    raise ParityError("operator has no definite parity; split it with split_parity first")


def super_d(Q: SparseOperator, a: SparseOperator) -> SparseOperator:
    """Superderivation ``da = Q a - (-1)^|a| a Q``."""
    sign = -1.0 if degree(a) else 1.0
    return Q @ a - (a @ Q) * sign


def skms(ctx: ThermalContext, a: SparseOperator) -> complex:
    """``mu_beta(a) = Str(a exp(-beta H))`` (not normalized)."""
    _shared(ctx, a)
    return complex(np.dot(a.diagonal(), ctx.parity * ctx.weights))


def twisted_kms_defect(ctx: ThermalContext, a: SparseOperator, b: SparseOperator) -> float:
    """``|mu(ab) - mu(b^Gamma sigma_{i beta}(a))|``."""
    return abs(skms(ctx, a @ b) - skms(ctx, graded(b) @ sigma_ibeta(ctx, a)))


def witten_index(ctx: ThermalContext) -> float:
    """``Str exp(-beta H)``; a per-mode product on occupancy-cut spaces.

    The product avoids the cancellation of the alternating basis sum.
    """
    if ctx.space.truncation.kind == "occupancy":
        return ctx.mode_factors()[1]
    return ctx.StrZ


def pre_skms_nullspace(space: FockSpace, beta: float, energies=None, graded_space: bool = True) -> int:
    """Dimension of the solution space of the twisted KMS condition on ``M_d``.

    The unknown is ``m_ij = mu(E_ij)`` on the matrix units. Each pair of
    units gives the row ``mu(E_ij E_kl) - mu(E_kl^Gamma sigma_{i beta}(E_ij))``,
    that is ``delta_jk m_il - g_k g_l exp(-beta (E_i - E_j)) delta_li m_kj``.
    The nullity is counted with singular values below ``1e-10`` times the
    largest.
    """
    d = space.dim
    if d > NULLSPACE_MAX_DIM:
        raise ValueError(f"dimension {d} exceeds the cap {NULLSPACE_MAX_DIM}")
    en = space.energies if energies is None else np.asarray(energies, dtype=float)
    g = parity(space) if graded_space else np.ones(d)
    rows = []
    for i in range(d):
        for j in range(d):
            shiftf = math.exp(-beta * (en[i] - en[j]))
            for k in range(d):
                for l in range(d):
                    row = np.zeros(d * d)
                    if j == k:
                        row[i * d + l] += 1.0
                    if l == i:
                        row[k * d + j] -= g[k] * g[l] * shiftf
                    if row.any():
                        rows.append(row)
    A = np.array(rows)
    s = np.linalg.svd(A, compute_uv=False)
    rank = int(np.sum(s > RANK_TOL * s[0]))
    return d * d - rank


def random_operator(space: FockSpace, rng: np.random.Generator, nnz: int = 40, kind: str | None = None):
    """Random complex sparse operator; ``kind`` ``"even"``/``"odd"`` projects its parity."""
    d = space.dim
    rows = rng.integers(0, d, nnz)
    cols = rng.integers(0, d, nnz)
    vals = rng.normal(size=nnz) + 1j * rng.normal(size=nnz)
    a = SparseOperator(space, sp.coo_matrix((vals, (rows, cols)), shape=(d, d)))
    if kind is None:
        return a
    even, odd = split_parity(a)
    if kind == "even":
        return even
    if kind == "odd":
        return odd
    raise ValueError(f"unknown parity {kind!r}")


def report(check: str, beta: float, dims: int, defect: float, tol: float) -> dict:
    return {"check": check, "beta": beta, "dims": dims, "defect": defect, "pass": bool(defect <= tol)}
