"""Truncated bosonic, fermionic and graded Fock spaces with sparse operators.

Two truncations are available. ``FockSpace.energy_cut`` keeps every bosonic
occupation of energy at most ``E_max`` over the positive modes (the basis is
exactly the lattice-point enumeration of :mod:`kronlab.counting`).
``FockSpace.occupancy_cut`` keeps occupations ``n <= M`` per bosonic mode and
``n <= 1`` per fermionic mode, in tensor-product order; with
``doubled=True`` the modes are ``+omega_1..+omega_K, -omega_1..-omega_K``.

Raising operators drop images that leave the basis. Identities that fail
only because of the cut are asserted on :meth:`FockSpace.protected` states.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .apalgebra import TrigPolynomial, delta_truncated, evaluate
from .counting import occupations_up_to
from .frequencies import FrequencySystem, explicit

STATISTICS = ("boson", "fermion", "graded")


def _void_rows(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    return a.view(np.dtype((np.void, a.dtype.itemsize * a.shape[1]))).ravel()


@dataclass(frozen=True)
class Truncation:
    kind: str  # "energy" | "occupancy"
    value: float


class FockSpace:
    """Finite basis of occupations; row 0 is the vacuum.

    ``occ`` has one column per bosonic mode followed by one per fermionic
    mode. ``boson_freqs`` and ``fermion_freqs`` hold the signed frequency of
    each column.
    """

    def __init__(self, statistics, sys, K, truncation, occ, boson_freqs, fermion_freqs, doubled=False):
        if statistics not in STATISTICS:
            raise ValueError(f"statistics must be one of {STATISTICS}")
        self.statistics = statistics
        self.sys = sys
        self.K = int(K)
        self.truncation = truncation
        self.doubled = doubled
        self.occ = np.ascontiguousarray(occ, dtype=np.int64)
        self.occ.setflags(write=False)
        self.boson_freqs = np.asarray(boson_freqs, dtype=float)
        self.fermion_freqs = np.asarray(fermion_freqs, dtype=float)
        self.nb = len(self.boson_freqs)
        self.nf = len(self.fermion_freqs)
        if self.occ.shape[1] != self.nb + self.nf:
            raise ValueError("occupation width does not match the mode count")
        if np.any(self.occ[0]):
            raise ValueError("the vacuum must be the first basis state")
        self.energies = self.occ[:, : self.nb] @ np.abs(self.boson_freqs) + self.occ[:, self.nb :] @ np.abs(
            self.fermion_freqs
        )
        keys = _void_rows(self.occ)
        self._order = np.argsort(keys, kind="stable")
        self._sorted = keys[self._order]

    # construction -------------------------------------------------------

    @classmethod
    def energy_cut(cls, sys: FrequencySystem, E_max: float, K: int | None = None) -> "FockSpace":
        """Bosonic space over the positive modes with energy at most ``E_max``.

        ``K`` restricts to the first ``K`` modes; by default every mode with
        ``omega <= E_max`` is used.
        """
        if K is not None:
            if not 1 <= K <= sys.count:
                raise ValueError(f"K={K} outside 1..{sys.count}")
            occ, _ = occupations_up_to(explicit(sys.omegas[:K]), E_max)
            freqs = sys.omegas[:K]
            if occ.shape[1] < K:
                occ = np.hstack([occ, np.zeros((len(occ), K - occ.shape[1]), dtype=np.int64)])
        else:
            occ, _ = occupations_up_to(sys, E_max)
            freqs = sys.omegas[: occ.shape[1]]
        return cls("boson", sys, len(freqs), Truncation("energy", float(E_max)), occ, freqs, [])

    @classmethod
    def occupancy_cut(
        cls, sys: FrequencySystem, K: int, M: int = 1, statistics: str = "boson", doubled: bool = False
    ) -> "FockSpace":
        """Tensor-product space: bosons ``0..M`` per mode, fermions ``0..1``.

        The graded space orders states boson-major, fermion-minor, with one
        fermionic mode per bosonic mode.
        """
        if not 1 <= K <= sys.count:
            raise ValueError(f"K={K} outside 1..{sys.count}")
        if statistics != "fermion" and M < 1:
            raise ValueError("boson cutoff M must be at least 1")
        freqs = np.asarray(sys.omegas[:K], dtype=float)
        if doubled:
            freqs = np.concatenate([freqs, -freqs])
        bos = freqs if statistics in ("boson", "graded") else np.zeros(0)
        fer = freqs if statistics in ("fermion", "graded") else np.zeros(0)
        ranges = [range(M + 1)] * len(bos) + [range(2)] * len(fer)
        occ = np.array(list(itertools.product(*ranges)), dtype=np.int64).reshape(-1, len(bos) + len(fer))
        return cls(statistics, sys, K, Truncation("occupancy", int(M)), occ, bos, fer, doubled)

    # queries ------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.occ)

    def __repr__(self):
        t = self.truncation
        return (
            f"FockSpace({self.statistics}, K={self.K}, {t.kind}={t.value:g}, "
            f"doubled={self.doubled}, dim={self.dim})"
        )

    def locate(self, targets: np.ndarray) -> np.ndarray:
        """Basis positions of occupation rows, ``-1`` where absent."""
        targets = np.atleast_2d(np.asarray(targets, dtype=np.int64))
        out = np.full(len(targets), -1, dtype=np.int64)
        ok = np.all(targets >= 0, axis=1)
        if not ok.any():
            return out
        keys = _void_rows(targets[ok])
        pos = np.searchsorted(self._sorted, keys)
        pos = np.minimum(pos, len(self._sorted) - 1)
        hit = self._sorted[pos] == keys
        found = np.full(len(keys), -1, dtype=np.int64)
        found[hit] = self._order[pos[hit]]
        out[ok] = found
        return out

    def index(self, occupation) -> int:
        return int(self.locate(np.asarray(occupation)[None, :])[0])

    def basis_state(self, occupation) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        i = self.index(occupation)
        if i < 0:
            raise KeyError(f"{occupation} is not in the basis")
        v[i] = 1.0
        return v

    def _boson_mode(self, mode: int) -> int:
        if self.nb == 0:
            raise ValueError("space has no bosonic modes")
        if not 0 <= mode < self.nb:
            raise IndexError(f"bosonic mode {mode} outside 0..{self.nb - 1}")
        return mode

    def _fermion_mode(self, mode: int) -> int:
        if self.nf == 0:
            raise ValueError("space has no fermionic modes")
        if not 0 <= mode < self.nf:
            raise IndexError(f"fermionic mode {mode} outside 0..{self.nf - 1}")
        return self.nb + mode

    def negative_mode(self, j: int) -> int:
        """Column of ``-omega_j`` in a doubled layout."""
        if not self.doubled:
            raise ValueError("negative frequencies need a doubled-mode space")
        half = (self.nb or self.nf) // 2
        if not 0 <= j < half:
            raise IndexError(f"mode {j} outside 0..{half - 1}")
        return half + j

    def protected(self, modes=None) -> np.ndarray:
        """States whose image under every bosonic raising operator stays in the basis."""
        modes = range(self.nb) if modes is None else modes
        mask = np.ones(self.dim, dtype=bool)
        for m in modes:
            self._boson_mode(m)
            up = self.occ.copy()
            up[:, m] += 1
            mask &= self.locate(up) >= 0
        return mask

    def manifest(self) -> list[list[int]]:
        return self.occ.tolist()


class SparseOperator:
    """Complex sparse matrix acting on a fixed :class:`FockSpace` basis."""

    __array_priority__ = 20

    def __init__(self, space: FockSpace, mat):
        mat = sp.csr_matrix(mat, dtype=complex)
        if mat.shape != (space.dim, space.dim):
            raise ValueError(f"matrix shape {mat.shape} does not match dim {space.dim}")
        self.space = space
        self.mat = mat

    def __repr__(self):
        return f"SparseOperator(dim={self.space.dim}, nnz={self.mat.nnz})"

    def _same(self, other: "SparseOperator"):
        if other.space is not self.space:
            raise ValueError("operators act on different spaces")

    def __add__(self, other):
        if isinstance(other, SparseOperator):
            self._same(other)
            return SparseOperator(self.space, self.mat + other.mat)
        return SparseOperator(self.space, self.mat + other * sp.identity(self.space.dim, format="csr"))

    __radd__ = __add__

    def __neg__(self):
        return SparseOperator(self.space, -self.mat)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, SparseOperator):
            return self @ c
        return SparseOperator(self.space, self.mat * complex(c))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return SparseOperator(self.space, self.mat / complex(c))

    def __matmul__(self, other):
        if isinstance(other, SparseOperator):
            self._same(other)
            return SparseOperator(self.space, self.mat @ other.mat)
        return self.mat @ np.asarray(other)

    def adjoint(self) -> "SparseOperator":
        return SparseOperator(self.space, self.mat.conj().T)

    @property
    def H(self) -> "SparseOperator":
        return self.adjoint()

    def toarray(self) -> np.ndarray:
        return self.mat.toarray()

    def diagonal(self) -> np.ndarray:
        return self.mat.diagonal()

    @property
    def nnz(self) -> int:
        return self.mat.nnz

    def power(self, n: int) -> "SparseOperator":
        out = identity(self.space)
        for _ in range(n):
            out = out @ self
        return out

    def defect(self, other=None, mask=None, block: bool = False) -> float:
        """Largest entry of ``self - other`` on the columns in ``mask``.

        With ``block=True`` the rows are restricted to ``mask`` as well.
        """
        diff = self.mat if other is None else (self - other).mat
        if mask is not None:
            diff = diff[:, np.flatnonzero(mask)]
            if block:
                diff = diff[np.flatnonzero(mask), :]
        return float(abs(diff).max()) if diff.nnz else 0.0

    def to_json(self) -> dict:
        """Coordinate triplets ``(row, col, re, im)`` plus the basis manifest."""
        coo = self.mat.tocoo()
        order = np.lexsort((coo.col, coo.row))
        entries = [
            [int(coo.row[i]), int(coo.col[i]), float(coo.data[i].real), float(coo.data[i].imag)] for i in order
        ]
        return {
            "dim": self.space.dim,
            "statistics": self.space.statistics,
            "basis": self.space.manifest(),
            "entries": entries,
        }

    @classmethod
    def from_json(cls, space: FockSpace, data: dict) -> "SparseOperator":
        if data["basis"] != space.manifest():
            raise ValueError("basis manifest does not match the space")
        e = np.asarray(data["entries"], dtype=float).reshape(-1, 4)
        mat = sp.coo_matrix(
            (e[:, 2] + 1j * e[:, 3], (e[:, 0].astype(int), e[:, 1].astype(int))), shape=(space.dim, space.dim)
        )
        return cls(space, mat)


def commutator(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    return a @ b - b @ a


def anticommutator(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    return a @ b + b @ a


def identity(space: FockSpace) -> SparseOperator:
    return SparseOperator(space, sp.identity(space.dim, dtype=complex, format="csr"))


def diag(space: FockSpace, values) -> SparseOperator:
    return SparseOperator(space, sp.diags(np.asarray(values, dtype=complex), format="csr"))


def _move(space: FockSpace, delta: np.ndarray, amp=None) -> SparseOperator:
    """Matrix sending ``e(eta)`` to ``amp(eta) e(eta + delta)`` when that state exists."""
    targets = space.occ + delta
    rows = space.locate(targets)
    cols = np.arange(space.dim)
    vals = np.ones(space.dim, dtype=complex) if amp is None else np.asarray(amp, dtype=complex)
    keep = (rows >= 0) & (vals != 0)
    mat = sp.csr_matrix((vals[keep], (rows[keep], cols[keep])), shape=(space.dim, space.dim))
    return SparseOperator(space, mat)


def shift(space: FockSpace, mode: int) -> SparseOperator:
    """Unilateral shift ``u``: ``e(eta) -> e(eta + omega_mode)``."""
    col = space._boson_mode(mode)
    delta = np.zeros(space.occ.shape[1], dtype=np.int64)
    delta[col] = 1
    return _move(space, delta)


def boson_ops(space: FockSpace, mode: int) -> tuple[SparseOperator, SparseOperator]:
    """``(a, a*)`` with ``a* e(eta) = sqrt(n + 1) e(eta + omega)``."""
    col = space._boson_mode(mode)
    delta = np.zeros(space.occ.shape[1], dtype=np.int64)
    delta[col] = 1
    create = _move(space, delta, np.sqrt(space.occ[:, col] + 1.0))
    return create.adjoint(), create


def fermion_ops(space: FockSpace, mode: int, jordan_wigner: bool = True) -> tuple[SparseOperator, SparseOperator]:
    """``(b, b*)`` in Jordan-Wigner form.

    ``b*`` fills an empty mode with sign ``(-1)^(occupied fermionic modes
    before it)``. ``jordan_wigner=False`` drops the sign; those operators
    fail to anticommute across modes and exist only to show why the sign is
    needed.
    """
    col = space._fermion_mode(mode)
    delta = np.zeros(space.occ.shape[1], dtype=np.int64)
    delta[col] = 1
    amp = (space.occ[:, col] == 0).astype(float)
    if jordan_wigner:
        before = space.occ[:, space.nb : col].sum(axis=1)
        amp = amp * (-1.0) ** before
    create = _move(space, delta, amp)
    return create.adjoint(), create


def toeplitz(space: FockSpace, f: TrigPolynomial) -> SparseOperator:
    """``T(f) = sum_eta f_eta prod_omega u_omega(n_omega)`` on a bosonic space.

    ``u(n) = u^n`` for ``n >= 0`` and ``(u*)^(-n)`` otherwise. Lowering is
    applied before raising, so an entry survives exactly when the target
    occupation is in the basis.
    """
    if space.nb == 0:
        raise ValueError("Toeplitz operators need bosonic modes")
    out = sp.csr_matrix((space.dim, space.dim), dtype=complex)
    for idx, c in f.terms.items():
        delta = np.zeros(space.occ.shape[1], dtype=np.int64)
        if any(m >= space.nb for m, _ in idx):
            # modes outside an energy-cut space are empty in every basis state, so the compression drops the term
            if space.truncation.kind == "energy" and space.statistics == "boson":
                continue
            raise ValueError(f"polynomial uses a mode beyond the {space.nb} of this space")
        for m, n in idx:
            delta[m] = n
        out = out + c * _move(space, delta).mat
    return SparseOperator(space, out)


def hamiltonian(space: FockSpace, part: str = "total") -> SparseOperator:
    """Diagonal energy operator: ``part`` is ``"total"``, ``"boson"`` or ``"fermion"``.

    On an energy-cut space the total is ``H_+``.
    """
    nb = space.nb
    if part == "total":
        vals = space.energies
    elif part == "boson":
        vals = space.occ[:, :nb] @ np.abs(space.boson_freqs)
    elif part == "fermion":
        vals = space.occ[:, nb:] @ np.abs(space.fermion_freqs)
    else:
        raise ValueError(f"unknown part {part!r}")
    return diag(space, vals)


def number(space: FockSpace) -> SparseOperator:
    """Fermion number ``F``; total boson number on a purely bosonic space."""
    if space.nf:
        return diag(space, space.occ[:, space.nb :].sum(axis=1))
    return diag(space, space.occ.sum(axis=1))


def parity(space: FockSpace) -> np.ndarray:
    """Diagonal of the grading ``(-1)^F``."""
    return (-1.0) ** space.occ[:, space.nb :].sum(axis=1)


def grading(space: FockSpace) -> SparseOperator:
    return diag(space, parity(space))


def evolution(space: FockSpace, t: float) -> SparseOperator:
    """``U(t) = exp(i t H)`` (diagonal)."""
    return diag(space, np.exp(1j * t * space.energies))


def _k_pairs(space: FockSpace, K: int | None) -> int:
    half = (space.nb or space.nf) // 2
    K = half if K is None else K
    if not 1 <= K <= half:
        raise ValueError(f"K={K} outside 1..{half}")
    return K


def field_ops(space: FockSpace, x: float, t: float = 0.0, K: int | None = None):
    """``(phi_K(x, t), pi_K(x, t))`` summed over ``+-omega_1..+-omega_K``.

    ``phi = 2^-1/2 sum |w|^-1/2 (a*_w e^{it|w|} + a_{-w} e^{-it|w|}) e^{iwx}``
    and ``pi`` has ``i |w|^1/2`` in place of ``|w|^-1/2`` and a minus sign on
    the annihilation part, so both are hermitian and
    ``[phi(x), pi(y)] = i delta_K(x - y)`` on protected states.
    """
    if not space.doubled or space.nb == 0:
        raise ValueError("fields need a doubled bosonic or graded space")
    K = _k_pairs(space, K)
    phi = SparseOperator(space, sp.csr_matrix((space.dim, space.dim), dtype=complex))
    pi = SparseOperator(space, sp.csr_matrix((space.dim, space.dim), dtype=complex))
    half = space.nb // 2
    for j in range(K):
        for col, opp in ((j, half + j), (half + j, j)):
            w = space.boson_freqs[col]
            _, create = boson_ops(space, col)
            annihilate, _ = boson_ops(space, opp)
            ph_in, ph_out = np.exp(1j * t * abs(w)), np.exp(-1j * t * abs(w))
            wave = np.exp(1j * w * x) / np.sqrt(2.0)
            phi = phi + (create * ph_in + annihilate * ph_out) * (wave / np.sqrt(abs(w)))
            pi = pi + (create * ph_in - annihilate * ph_out) * (1j * wave * np.sqrt(abs(w)))
    return phi, pi


def fermi_fields(space: FockSpace, x: float, K: int | None = None):
    """Hermitian fermi fields ``(psi_1(x), psi_2(x))``.

    ``psi_1 = sqrt2 sum_k (b*_{+k} e^{-i w_k x} + b_{+k} e^{i w_k x})`` and
    ``psi_2`` is the same over the negative-frequency modes with conjugate
    phases; ``[psi_i(x), psi_j(y)]_+ = 2 delta_ij delta_K(x - y)``.
    """
    if not space.doubled or space.nf == 0:
        raise ValueError("fermi fields need a doubled fermionic or graded space")
    K = _k_pairs(space, K)
    half = space.nf // 2
    zero = sp.csr_matrix((space.dim, space.dim), dtype=complex)
    psi1, psi2 = SparseOperator(space, zero), SparseOperator(space, zero)
    r2 = np.sqrt(2.0)
    for j in range(K):
        w = space.fermion_freqs[j]
        b, bd = fermion_ops(space, j)
        psi1 = psi1 + (bd * np.exp(-1j * w * x) + b * np.exp(1j * w * x)) * r2
        b, bd = fermion_ops(space, half + j)
        psi2 = psi2 + (bd * np.exp(1j * w * x) + b * np.exp(-1j * w * x)) * r2
    return psi1, psi2


def supercharge(space: FockSpace, K: int | None = None) -> SparseOperator:
    """``Q = sum_w sqrt|w| (a*_w b_w + a_w b*_w)`` over the graded modes.

    With ``K`` only the first ``K`` frequency pairs (both signs on a doubled
    space) contribute.
    """
    if space.statistics != "graded":
        raise ValueError("the supercharge needs a graded space")
    if K is None:
        cols = range(space.nb)
    elif space.doubled:
        K = _k_pairs(space, K)
        cols = [j for j in range(K)] + [space.nb // 2 + j for j in range(K)]
    else:
        if not 1 <= K <= space.nb:
            raise ValueError(f"K={K} outside 1..{space.nb}")
        cols = range(K)
    Q = SparseOperator(space, sp.csr_matrix((space.dim, space.dim), dtype=complex))
    for col in cols:
        a, ad = boson_ops(space, col)
        b, bd = fermion_ops(space, col)
        Q = Q + (ad @ b + a @ bd) * np.sqrt(abs(space.boson_freqs[col]))
    return Q


def delta_K(sys: FrequencySystem, K: int, x: float) -> complex:
    """Value of the truncated delta at ``x``."""
    return complex(evaluate(delta_truncated(sys, K), x))
