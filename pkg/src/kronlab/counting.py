"""Exact eigenvalue counting for H_+: lattice points of N[Omega_+] below E.

The count includes the vacuum, so ``count_N(sys, E).N >= 1`` for ``E >= 0``.
Lattice points are enumerated over modes in decreasing frequency with
per-mode occupancy ``floor(budget / omega)``; budgets are processed as numpy
arrays, split into chunks to keep memory bounded, and the smallest mode is
summed in closed form.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .frequencies import FrequencySystem

DEFAULT_CAP = 10**8
DP_WORK_CAP = 5 * 10**7
CHUNK = 1 << 21


class PrefixTooShortError(ValueError):
    """The materialized frequencies do not reach past the energy bound."""


class CountCapExceeded(RuntimeError):
    """The lattice-point count would exceed the configured cap."""


def tie_tolerance(E: float) -> float:
    return 1e-12 * max(1.0, abs(E))


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("KRONLAB_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class CountResult:
    E: float
    N: int
    enumerated: list[tuple[float, int]] | None = None
    runtime_ms: float = 0.0


def _active_modes(sys: FrequencySystem, E: float) -> np.ndarray:
    if not sys.finite and sys.omegas[-1] <= E:
        raise PrefixTooShortError(
            f"largest materialized frequency {sys.omegas[-1]:g} does not exceed E={E:g}; "
            "extend the system (FrequencySystem.extend_beyond)"
        )
    return sys.omegas[sys.omegas <= E + tie_tolerance(E)][::-1]


def _expand(budgets: np.ndarray, w: float) -> np.ndarray:
    reps = np.floor(budgets / w).astype(np.int64) + 1
    total = int(reps.sum())
    owner = np.repeat(np.arange(len(budgets)), reps)
    k = np.arange(total) - np.repeat(np.cumsum(reps) - reps, reps)
    return budgets[owner] - k * w


def _count_from(budgets: np.ndarray, modes: np.ndarray, cap: int) -> int:
    """Lattice points of ``modes`` fitting into each budget, summed."""
    if len(modes) == 0:
        return len(budgets)
    if len(modes) == 1:
        return int(np.sum(np.floor(budgets / modes[0]).astype(np.int64) + 1))
    total = 0
    w, rest = modes[0], modes[1:]
    for start in range(0, len(budgets), CHUNK):
        chunk = budgets[start : start + CHUNK]
        size = int(np.sum(np.floor(chunk / w).astype(np.int64) + 1))
        if size > CHUNK and len(chunk) > 1:
            # split further before expanding
            half = len(chunk) // 2
            total += _count_from(chunk[:half], modes, cap) + _count_from(chunk[half:], modes, cap)
        elif size > CHUNK:
            # one budget: partition by the occupancy of this mode
            kmax = int(np.floor(chunk[0] / w))
            for k0 in range(0, kmax + 1, CHUNK):
                ks = np.arange(k0, min(kmax + 1, k0 + CHUNK))
                total += _count_from(chunk[0] - ks * w, rest, cap)
        else:
            total += _count_from(_expand(chunk, w), rest, cap)
        if total > cap:
            raise CountCapExceeded(f"N exceeds the cap {cap}")
    return total


def _integer_modes(modes: np.ndarray) -> np.ndarray | None:
    ints = np.rint(modes)
    if np.all(np.abs(modes - ints) <= 1e-12 * np.maximum(1.0, modes)) and np.all(ints >= 1):
        return ints.astype(np.int64)
    return None


def _lower_bound_log(modes: np.ndarray, budget: float) -> float:
    """``log`` of a lower bound on the lattice count.

    For any ``j``, occupations ``n_i <= budget / (j omega_j)`` on the ``j``
    smallest modes all fit, giving ``(floor(budget / (j omega_j)) + 1)^j``
    points.
    """
    asc = np.sort(modes)
    j = np.arange(1, len(asc) + 1)
    return float(np.max(j * np.log(np.floor(budget / (j * asc)) + 1.0), initial=0.0))


def _count_dp(modes: np.ndarray, E: float) -> int:
    """Coin-change count of lattice points for integer frequencies, exact in Python ints."""
    top = int(np.floor(E + tie_tolerance(E)))
    if top * len(modes) > DP_WORK_CAP:
        raise CountCapExceeded(f"dp table of {top} x {len(modes)} exceeds the work cap {DP_WORK_CAP:.0e}")
    ways = [1] + [0] * top
    for w in (int(v) for v in modes):
        for e in range(w, top + 1):
            ways[e] += ways[e - w]
    return sum(ways)


def count_N(
    sys: FrequencySystem,
    E: float,
    cap: int = DEFAULT_CAP,
    workers: int | None = None,
    enumerate_spectrum: bool = False,
    method: str = "auto",
) -> CountResult:
    """Number of lattice points (vacuum included) with energy at most ``E``.

    ``method="enumerate"`` walks the lattice points; the search may be split
    by the occupancy of the largest active mode and run on ``workers``
    threads (capped by ``KRONLAB_THREADS``), with partial counts merged in a
    fixed order. ``method="dp"`` counts integer-valued frequencies by a
    coin-change recursion in ``O(E K)`` with no cap. ``"auto"`` uses the
    recursion for integer frequencies and enumerates otherwise.
    """
    t0 = time.perf_counter()
    if method not in ("auto", "enumerate", "dp"):
        raise ValueError(f"unknown counting method {method!r}")
    if E < 0:
        return CountResult(E, 0, [] if enumerate_spectrum else None)
    modes = _active_modes(sys, E)
    budget = E + tie_tolerance(E)
    if enumerate_spectrum:
        spec = spectrum_up_to(sys, E, cap=cap)
        N = sum(m for _, m in spec)
        return CountResult(E, N, spec, (time.perf_counter() - t0) * 1e3)
    ints = _integer_modes(modes) if method != "enumerate" else None
    if method == "dp" and ints is None:
        raise ValueError("dp counting needs integer frequencies")
    if ints is not None:
        N = _count_dp(ints, E)
    elif len(modes) == 0:
        N = 1
    else:
        N = _enumerate_count(modes, budget, cap, workers)
    return CountResult(E, N, None, (time.perf_counter() - t0) * 1e3)


def _enumerate_count(modes: np.ndarray, budget: float, cap: int, workers: int | None) -> int:
    if _lower_bound_log(modes, budget) > math.log(cap):
        raise CountCapExceeded(f"N exceeds the cap {cap} (lower bound)")
    workers = min(workers or 1, thread_cap())
    top, rest = modes[0], modes[1:]
    parts = [np.array([budget - k * top]) for k in range(int(np.floor(budget / top)) + 1)]
    if workers > 1 and len(parts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(lambda b: _count_from(b, rest, cap), parts))
    else:
        counts = [_count_from(b, rest, cap) for b in parts]
    N = int(sum(counts))
    if N > cap:
        raise CountCapExceeded(f"N exceeds the cap {cap}")
    return N


def occupations_up_to(sys: FrequencySystem, E: float, cap: int = 10**7):
    """All occupations with energy at most ``E``.

    Returns ``(occ, energies)`` where ``occ`` has shape ``(N, K)`` over the
    first ``K`` modes (those with ``omega <= E``), sorted by energy, then
    lexicographically; the vacuum is row 0.
    """
    if E < 0:
        return np.zeros((0, 0), dtype=np.int64), np.zeros(0)
    modes = _active_modes(sys, E)[::-1]  # ascending
    K = len(modes)
    budget = E + tie_tolerance(E)
    occ = np.zeros((1, K), dtype=np.int64)
    rem = np.array([budget])
    for j in range(K - 1, -1, -1):
        w = modes[j]
        reps = np.floor(rem / w).astype(np.int64) + 1
        if int(reps.sum()) > cap:
            raise CountCapExceeded(f"enumeration exceeds the cap {cap}")
        owner = np.repeat(np.arange(len(rem)), reps)
        k = np.arange(int(reps.sum())) - np.repeat(np.cumsum(reps) - reps, reps)
        occ = occ[owner]
        occ[:, j] = k
        rem = rem[owner] - k * w
    energies = occ @ modes if K else np.zeros(1)
    order = np.lexsort(tuple(occ[:, j] for j in range(K - 1, -1, -1)) + (energies,))
    return occ[order], energies[order]


def spectrum_up_to(sys: FrequencySystem, E: float, cap: int = 10**7) -> list[tuple[float, int]]:
    """Distinct energies at most ``E`` with multiplicities, ascending.

    Energies within ``tie_tolerance(E)`` of the first member of a group are
    merged into that group.
    """
    if E < 0:
        return []
    _, energies = occupations_up_to(sys, E, cap=cap)
    energies = np.sort(energies)
    tol = tie_tolerance(E)
    out: list[tuple[float, int]] = []
    start = 0
    for i in range(1, len(energies) + 1):
        if i == len(energies) or energies[i] - energies[start] > tol:
            out.append((float(energies[start]), i - start))
            start = i
    return out


def window_ratio(sys: FrequencySystem, E: float, delta: float, cap: int = DEFAULT_CAP) -> float:
    """``(N(E) - N(E - delta)) / N(E)``, the fraction of levels in the top window."""
    if delta < 0:
        raise ValueError("window width must be nonnegative")
    top = count_N(sys, E, cap=cap).N
    if top == 0:
        raise ValueError(f"N({E}) = 0; ratio undefined")
    if delta == 0:
        return 0.0
    return (top - count_N(sys, E - delta, cap=cap).N) / top


def count_table(sys: FrequencySystem, grid, cap: int = DEFAULT_CAP) -> list[CountResult]:
    return [count_N(sys, float(E), cap=cap) for E in grid]
