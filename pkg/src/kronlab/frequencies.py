"""Frequency systems: the positive half of an even set of frequencies.

Only the positive frequencies are stored; the negative half is implied by
evenness. Four generator families are supported:

* ``"primelog"``   -- ``log p`` over ascending primes
* ``"dispersion"`` -- ``sqrt(n**2 + m**2)`` for ``n = 1, 2, ...``
* ``"powerlaw"``   -- ``A * n**alpha * (1 + mu_n)`` with a vanishing perturbation
* ``"explicit"``   -- a user supplied finite list, treated as the complete set

Mode positions are 0-based throughout the package: ``sys.omegas[0]`` is the
smallest frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

KINDS = ("primelog", "dispersion", "powerlaw", "explicit")
MU_FAMILIES = ("zero", "inv", "invlog")


def primes(count: int) -> np.ndarray:
    """First ``count`` primes by a deterministic sieve of Eratosthenes."""
    if count < 1:
        raise ValueError("count must be positive")
    if count < 6:
        bound = 15
    else:
        bound = int(count * (math.log(count) + math.log(math.log(count)))) + 3
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(bound**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    found = np.flatnonzero(sieve)
    return found[:count]


def perturbation(family: str, c: float, n: np.ndarray) -> np.ndarray:
    """The vanishing correction ``mu_n`` for the power-law family."""
    if family == "zero":
        return np.zeros(n.shape)
    if family == "inv":
        return c / n
    if family == "invlog":
        return c / np.log(n + 1.0)
    raise ValueError(f"unknown perturbation family {family!r}; expected one of {MU_FAMILIES}")


def _perturbation_bound(family: str, c: float, after: int) -> float:
    # sup |mu_n| over n > after; every family is monotone in |mu_n|
    n = after + 1
    if family == "zero":
        return 0.0
    if family == "inv":
        return abs(c) / n
    return abs(c) / math.log(n + 1.0)


@dataclass(frozen=True, eq=False)
class FrequencySystem:
    """Materialized prefix of the positive frequencies of a Kronecker system.

    Attributes
    ----------
    kind : str
        Generator tag, one of ``KINDS``.
    params : dict
        Generator parameters (``m`` for dispersion; ``A``, ``alpha``, ``mu``,
        ``c`` for powerlaw; nothing for primelog and explicit).
    omegas : ndarray
        Strictly increasing positive frequencies, read-only.
    """

    kind: str
    params: dict = field(default_factory=dict)
    omegas: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        omegas = np.array(self.omegas, dtype=float)
        omegas.setflags(write=False)
        object.__setattr__(self, "omegas", omegas)

    @property
    def count(self) -> int:
        return len(self.omegas)

    @property
    def finite(self) -> bool:
        """True when the stored frequencies are the whole positive set."""
        return self.kind == "explicit"

    def __len__(self):
        return self.count

    def __eq__(self, other):
        if not isinstance(other, FrequencySystem):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.params == other.params
            and np.array_equal(self.omegas, other.omegas)
        )

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.params.items())), self.omegas.tobytes()))

    def __repr__(self):
        head = ", ".join(f"{w:.6g}" for w in self.omegas[:4])
        more = ", ..." if self.count > 4 else ""
        return f"FrequencySystem({self.kind!r}, {self.params}, [{head}{more}], count={self.count})"

    def prefix(self, count: int) -> "FrequencySystem":
        if not 1 <= count <= self.count:
            raise ValueError(f"prefix length {count} outside 1..{self.count}")
        return FrequencySystem(self.kind, dict(self.params), self.omegas[:count])

    def extend(self, count: int) -> "FrequencySystem":
        """Return the system materialized to at least ``count`` frequencies."""
        if count <= self.count:
            return self
        if self.finite:
            raise ValueError("an explicit frequency list cannot be extended")
        return generate(self.kind, count, **self.params)

    def extend_beyond(self, bound: float) -> "FrequencySystem":
        """Extend until the largest stored frequency exceeds ``bound``.

        Finite systems are returned unchanged.
        """
        sys = self
        while not sys.finite and sys.omegas[-1] <= bound:
            sys = sys.extend(max(2 * sys.count, 16))
        return sys

    def envelope(self, after: int) -> tuple[float, float, float] | None:
        """Power-law envelope ``(alpha, a_low, a_high)`` valid for positions past ``after``.

        For every 1-based ``n > after``,
        ``a_low * n**alpha <= omega_n <= a_high * n**alpha``.
        Returns None for systems without a power-law envelope (explicit,
        primelog) or when ``after`` is too small for a positive lower constant.
        """
        if self.kind == "dispersion":
            m = float(self.params["m"])
            return 1.0, 1.0, math.sqrt(1.0 + (m / (after + 1)) ** 2)
        if self.kind == "powerlaw":
            A, alpha = float(self.params["A"]), float(self.params["alpha"])
            eps = _perturbation_bound(self.params.get("mu", "zero"), float(self.params.get("c", 0.0)), after)
            if eps >= 1.0:
                return None
            return alpha, A * (1.0 - eps), A * (1.0 + eps)
        return None

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "params": dict(self.params), "omegas": [float(w) for w in self.omegas]}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "FrequencySystem":
        kind, params, omegas = data["kind"], dict(data.get("params", {})), data["omegas"]
        if kind == "explicit":
            return explicit(omegas)
        sys = generate(kind, len(omegas), **params)
        if not np.allclose(sys.omegas, omegas, rtol=1e-14, atol=0.0):
            raise ValueError("stored omegas do not match the generator")
        return sys


def explicit(omegas: Sequence[float]) -> FrequencySystem:
    """Finite system from a list; validated like a generated prefix."""
    arr = np.asarray(omegas, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("explicit frequencies must be a nonempty 1-d list")
    if np.any(arr <= 0) or np.any(np.diff(arr) <= 0):
        raise ValueError("explicit frequencies must be positive and strictly increasing")
    return FrequencySystem("explicit", {}, arr)


def generate(kind: str, count: int, **params) -> FrequencySystem:
    """First ``count`` positive frequencies of a generator family.

    >>> generate("powerlaw", 5, A=1.0, alpha=1.0).omegas
    array([1., 2., 3., 4., 5.])
    """
    if int(count) != count or count < 1:
        raise ValueError(f"count must be a positive integer, got {count!r}")
    count = int(count)
    n = np.arange(1, count + 1, dtype=float)
    if kind == "primelog":
        if params:
            raise ValueError("primelog takes no parameters")
        omegas = np.log(primes(count).astype(float))
    elif kind == "dispersion":
        m = float(params["m"])
        params = {"m": m}
        omegas = np.sqrt(n * n + m * m)
    elif kind == "powerlaw":
        A = float(params.get("A", 1.0))
        alpha = float(params.get("alpha", 1.0))
        mu = params.get("mu", "zero")
        c = float(params.get("c", 0.0))
        if A <= 0:
            raise ValueError("powerlaw requires A > 0")
        if alpha < 1:
            raise ValueError("powerlaw requires alpha >= 1")
        params = {"A": A, "alpha": alpha, "mu": mu, "c": c}
        omegas = A * n**alpha * (1.0 + perturbation(mu, c, n))
        if np.any(omegas <= 0):
            raise ValueError("powerlaw parameters give a nonpositive frequency")
        if np.any(np.diff(omegas) <= 0):
            raise ValueError("powerlaw parameters give a non-increasing prefix")
    elif kind == "explicit":
        raise ValueError("use explicit(omegas) for explicit lists")
    else:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    return FrequencySystem(kind, params, omegas)


@dataclass(frozen=True)
class AxiomReport:
    """Checkable Kronecker-system conditions on a finite prefix.

    ``divergent`` is None when it cannot be judged (finite explicit lists);
    ``independence`` is always None since it is not numerically checkable.
    """

    positivity: bool
    monotone: bool
    divergent: bool | None
    independence: None = None

    @property
    def passed(self) -> bool:
        return self.positivity and self.monotone and self.divergent is not False


def check_axioms(
    sys: FrequencySystem | Sequence[float], bound: float | None = None, max_count: int = 10**6
) -> AxiomReport:
    """Report positivity, strict monotonicity and divergence of a prefix.

    Divergence is tested by extending a generated system until it passes
    ``bound`` (default: largest stored frequency + 1) without exceeding
    ``max_count`` frequencies.
    """
    if isinstance(sys, FrequencySystem):
        omegas = sys.omegas
    else:
        omegas = np.asarray(sys, dtype=float)
    positivity = bool(np.all(omegas > 0))
    monotone = bool(np.all(np.diff(omegas) > 0))
    divergent = None
    if isinstance(sys, FrequencySystem) and not sys.finite:
        target = omegas[-1] + 1.0 if bound is None else bound
        longer = sys
        while longer.omegas[-1] <= target and longer.count < max_count:
            longer = longer.extend(min(2 * longer.count, max_count))
        divergent = bool(longer.omegas[-1] > target)
    return AxiomReport(positivity, monotone, divergent)
