"""Independent reference computations for the tests.

None of these share code with the package: partition numbers come from
Euler's pentagonal-number recurrence, small lattice counts from brute-force
products, and analytic sums are written out directly.
"""

from __future__ import annotations

import itertools
import math


def partition_numbers(n: int) -> list[int]:
    """p(0..n) by Euler's pentagonal recurrence."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p


def cumulative_partitions(n: int) -> list[int]:
    """sum_{k <= E} p(k) for E = 0..n, the lattice count for omega_n = n."""
    out, acc = [], 0
    for v in partition_numbers(n):
        acc += v
        out.append(acc)
    return out


def brute_count(omegas, E: float, tol: float = 1e-9) -> int:
    """Lattice points of energy <= E by an explicit product over occupations."""
    ranges = [range(int(math.floor((E + tol) / w)) + 1) for w in omegas if w <= E + tol]
    return sum(1 for occ in itertools.product(*ranges) if sum(n * w for n, w in zip(occ, omegas)) <= E + tol)


def brute_energies(omegas, E: float, tol: float = 1e-9) -> list[float]:
    active = [w for w in omegas if w <= E + tol]
    ranges = [range(int(math.floor((E + tol) / w)) + 1) for w in active]
    out = []
    for occ in itertools.product(*ranges):
        e = sum(n * w for n, w in zip(occ, active))
        if e <= E + tol:
            out.append(e)
    return sorted(out)


def phi_direct(omegas, s: float) -> float:
    return -math.fsum(math.log1p(-math.exp(-s * w)) for w in omegas)


def finite_difference(fn, x: float, h: float) -> float:
    return (fn(x + h) - fn(x - h)) / (2 * h)
