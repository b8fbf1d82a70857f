"""Saddle-point (Tauberian) asymptotics of the counting function.

``phi(s) = -sum_n log(1 - exp(-s omega_n))`` is the logarithm of the
partition function of H_+. Its derivatives drive the saddle-point estimate

    N(E) ~ (2 pi sigma^2 phi''(sigma))^(-1/2) exp(sigma E + phi(sigma)),

where ``sigma = sigma_E`` solves ``phi'(sigma) + E = 0``. This module
evaluates the series with rigorous tail bounds, solves the saddle equation,
and checks the growth hypotheses (alpha), (beta), (gamma) numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .counting import DEFAULT_CAP, count_N
from .frequencies import FrequencySystem
from .specfun import gamma_zeta

MAX_TERMS = 2 * 10**7


class DivergentSeriesError(ValueError):
    """The frequency series does not converge at the requested point."""


class SeriesTruncationError(RuntimeError):
    """The tail bound could not be met within ``MAX_TERMS`` frequencies."""


class BracketError(RuntimeError):
    """No sign change of phi'(sigma) + E inside [1e-12, 1e6]."""


def _tail_bound(sys: FrequencySystem, M: int, s: float, k: int) -> float:
    """Upper bound on ``sum_{n > M} omega_n**k exp(-s omega_n)`` (1-based n)."""
    if sys.finite and M >= sys.count:
        return 0.0
    if sys.kind == "primelog":
        if s <= 1.0:
            raise DivergentSeriesError("the prime-log series diverges for s <= 1")
        P = math.exp(sys.omegas[M - 1])  # p_M; later primes exceed it
        a = k + 1
        x = (s - 1.0) * math.log(P)
        if s * math.log(P) <= k:
            return math.inf
        return special.gammaincc(a, x) * special.gamma(a) / (s - 1.0) ** a
    env = sys.envelope(M)
    if env is None:
        return math.inf
    alpha, lo, hi = env
    y = s * lo * M**alpha
    if y <= k:
        return math.inf
    a = k + 1.0 / alpha
    return (hi / (s * lo)) ** k / alpha * (s * lo) ** (-1.0 / alpha) * special.gammaincc(a, y) * special.gamma(a)


def f_alpha(x):
    """``x e^-x / (1 - e^-x)``: summand of ``-sigma phi'(sigma)`` at ``x = sigma omega``."""
    x = np.asarray(x, dtype=float)
    return x / np.expm1(x)


def g_alpha(x):
    """``x^2 e^-x / (1 - e^-x)^2``: summand of ``sigma^2 phi''(sigma)``."""
    x = np.asarray(x, dtype=float)
    return x * x * np.exp(-x) / np.expm1(-x) ** 2


def h_asymptotic(x, beta: float):
    """Shape function of the small-sigma asymptotic of ``Im phi'(sigma + i x sigma)``.

    ``h(x) = (1 + x^2)^(-beta/2) sin(beta arctan x) / x`` with ``h(0) = beta``.
    """
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0, 1.0, x)
    val = (1.0 + x * x) ** (-beta / 2) * np.sin(beta * np.arctan(x)) / safe
    return np.where(x == 0, beta, val)[()]


def powerlaw_constant(A: float, alpha: float) -> tuple[float, float]:
    """``(beta, C)`` with ``beta = 1 + 1/alpha`` and ``C = A^(-1/alpha) Gamma(beta) zeta(beta) / alpha``."""
    beta = 1.0 + 1.0 / alpha
    g, z = gamma_zeta(beta)
    return beta, A ** (-1.0 / alpha) * g * z / alpha


class PhiEvaluator:
    """Series evaluator for theta, phi, its derivatives and ``Im phi'`` off the real axis.

    The system is extended on demand until the analytic tail bound is below
    ``rel_tol`` times the partial sum.
    """

    def __init__(self, sys: FrequencySystem, rel_tol: float = 1e-12, max_terms: int = MAX_TERMS):
        if sys.kind == "explicit" and sys.count == 0:
            raise ValueError("empty system")
        self.sys = sys
        self.rel_tol = rel_tol
        self.max_terms = max_terms

    def _prefix(self, s: float, converged) -> np.ndarray:
        """Shortest doubling prefix whose tails satisfy ``converged(head, tail)``.

        ``tail(k)`` bounds the sum over later frequencies of
        ``2 omega^k e^{-s omega} / (1 - e^{-s omega})^3``, which dominates every
        summand used here.
        """
        if s <= 0:
            raise ValueError("s must be positive")
        sys = self.sys
        if sys.kind == "primelog" and s <= 1.0:
            raise DivergentSeriesError("phi(s) diverges for s <= 1 on the prime-log system")
        if sys.finite:
            return sys.omegas
        # first guess: where s*omega reaches ~40
        M = max(int(np.searchsorted(sys.omegas, 43.0 / s)) + 1, 16)
        while True:
            if M > self.max_terms:
                raise SeriesTruncationError(f"tail bound not met within {self.max_terms} terms at s={s:g}")
            if M > sys.count:
                sys = sys.extend(M)
            head = sys.omegas[:M]
            prefactor = 2.0 / (-math.expm1(-s * head[-1])) ** 3
            if converged(head, lambda k: prefactor * _tail_bound(sys, M, s, k)):
                if sys.count > self.sys.count:
                    self.sys = sys
                return head
            M *= 2

    def theta(self, s: float) -> float:
        def ok(w, tail):
            return tail(0) <= self.rel_tol * np.sum(np.exp(-s * w))

        return float(np.sum(np.exp(-s * self._prefix(s, ok))))

    def phi(self, s: float) -> float:
        return self.derivatives(s)[0]

    def derivatives(self, s: float) -> tuple[float, float, float, float]:
        """phi and its first three derivatives at real ``s > 0``."""
        def ok(w, tail):
            x = np.exp(-s * w)
            return all(tail(k) <= self.rel_tol * np.sum(w**k * x) for k in range(4))

        om = self._prefix(s, ok)
        x = np.exp(-s * om)
        d = -np.expm1(-s * om)
        p0 = -np.sum(np.log1p(-x))
        p1 = -np.sum(om * x / d)
        p2 = np.sum(om**2 * x / d**2)
        p3 = -np.sum(om**3 * x * (1.0 + x) / d**3)
        return float(p0), float(p1), float(p2), float(p3)

    @staticmethod
    def _im_terms(sigma, x, om):
        a = sigma * om
        b = x * sigma * om
        num = om * np.exp(-a) * np.sin(b)
        # 1 + e^{-2a} - 2 e^{-a} cos b, written without cancellation
        den = np.expm1(-a) ** 2 + 4.0 * np.exp(-a) * np.sin(b / 2) ** 2
        return num / den

    def im_phi_prime(self, sigma: float, x: float) -> float:
        """``Im phi'(sigma + i x sigma)`` from the explicit real series."""
        if x == 0:
            return 0.0

        def ok(w, tail):
            # |sin b| <= |x| sigma omega turns each tail term into an order-2 term
            return abs(x) * sigma * tail(2) <= self.rel_tol * abs(np.sum(self._im_terms(sigma, x, w)))

        return float(np.sum(self._im_terms(sigma, x, self._prefix(sigma, ok))))


def theta(sys: FrequencySystem, s: float, rel_tol: float = 1e-12) -> float:
    return PhiEvaluator(sys, rel_tol).theta(s)


def phi(sys: FrequencySystem, s: float, rel_tol: float = 1e-12) -> float:
    return PhiEvaluator(sys, rel_tol).phi(s)


def phi_derivatives(sys: FrequencySystem, s: float, rel_tol: float = 1e-12):
    return PhiEvaluator(sys, rel_tol).derivatives(s)


def im_phi_prime(sys: FrequencySystem, sigma: float, x: float, rel_tol: float = 1e-12) -> float:
    return PhiEvaluator(sys, rel_tol).im_phi_prime(sigma, x)


@dataclass
class SaddleResult:
    E: float
    sigma: float
    phi: float
    phi1: float
    phi2: float
    phi3: float
    log_N_tilde: float
    iterations: int = 0

    @property
    def N_tilde(self) -> float:
        return math.exp(self.log_N_tilde) if self.log_N_tilde < 709 else math.inf

    @property
    def residual(self) -> float:
        return abs(self.phi1 + self.E)


def log_n_tilde(sigma: float, E: float, p0: float, p2: float) -> float:
    return sigma * E + p0 - 0.5 * math.log(2.0 * math.pi * sigma * sigma * p2)


def solve_saddle(
    sys: FrequencySystem | PhiEvaluator, E: float, tol: float = 1e-10, max_iter: int = 200
) -> SaddleResult:
    """Solve ``phi'(sigma) = -E`` by bracketing and safeguarded Newton."""
    ev = sys if isinstance(sys, PhiEvaluator) else PhiEvaluator(sys)
    if E <= 0:
        raise ValueError("E must be positive")
    lo_lim, hi_lim = 1e-12, 1e6

    def g(s):
        d = ev.derivatives(s)
        return d[1] + E, d

    s0 = 1.0 / ev.sys.omegas[0]
    lo = hi = s0
    g_lo, d_lo = g(lo)
    while g_lo > 0:  # -phi'(lo) < E: move left
        lo /= 4.0
        if lo < lo_lim:
            raise BracketError(f"no bracket for E={E:g}")
        g_lo, d_lo = g(lo)
    hi = lo
    g_hi, d_hi = g_lo, d_lo
    while g_hi <= 0:
        hi *= 4.0
        if hi > hi_lim:
            raise BracketError(f"no bracket for E={E:g}")
        g_hi, d_hi = g(hi)
    lo = hi / 4.0
    g_lo, d_lo = g(lo)
    # phi' + E is increasing in sigma: negative at lo, positive at hi
    s, (gs, d) = (lo, (g_lo, d_lo)) if abs(g_lo) < abs(g_hi) else (hi, (g_hi, d_hi))
    for it in range(1, max_iter + 1):
        if abs(gs) <= tol * E:
            break
        step = s - gs / d[2]
        if not lo < step < hi:
            step = 0.5 * (lo + hi)
        s = step
        gs, d = g(s)
        if gs < 0:
            lo = s
        else:
            hi = s
    else:
        raise RuntimeError(f"saddle solver did not converge for E={E:g}")
    p0, p1, p2, p3 = d
    return SaddleResult(E, s, p0, p1, p2, p3, log_n_tilde(s, E, p0, p2), it)


def n_tilde_shift_ratio(sys: FrequencySystem, E: float, c: float) -> float:
    """``N~(E + c/sigma_E) / N~(E)``.

    Since ``d log N~ / dE = sigma_E`` this tends to ``e^c``, a bounded
    factor; a shift of ``E`` by a fixed constant gives a ratio tending to 1.
    """
    ev = PhiEvaluator(sys)
    base = solve_saddle(ev, E)
    moved = solve_saddle(ev, E + c / base.sigma)
    return math.exp(moved.log_N_tilde - base.log_N_tilde)


@dataclass
class ComparisonRow:
    E: float
    N_exact: int
    N_tilde: float
    ratio: float
    sigma_E: float


def asymptotic_vs_exact(sys: FrequencySystem, grid, cap: int = DEFAULT_CAP) -> list[ComparisonRow]:
    ev = PhiEvaluator(sys)
    rows = []
    for E in grid:
        E = float(E)
        exact = count_N(sys.extend_beyond(E), E, cap=cap).N
        sad = solve_saddle(ev, E)
        ratio = math.exp(math.log(exact) - sad.log_N_tilde)
        rows.append(ComparisonRow(E, exact, sad.N_tilde, ratio, sad.sigma))
    return rows


@dataclass
class CheckReport:
    check: str
    passed: bool
    sigmas: list[float]
    values: dict[str, list[float]] = field(default_factory=dict)
    note: str = ""


def _strictly_increasing(v) -> bool:
    return bool(np.all(np.diff(v) > 0))


def check_alpha(sys: FrequencySystem, sigmas, growth_floor: float = 4.0) -> CheckReport:
    """Assumption (alpha): ``-sigma phi'`` and ``sigma^2 phi''`` increase without bound as sigma decreases.

    Unboundedness is judged on the finite grid: both sequences must be
    strictly increasing along decreasing sigma and grow by at least
    ``growth_floor`` from the largest to the smallest sigma.
    """
    ev = PhiEvaluator(sys)
    sig = sorted((float(s) for s in sigmas), reverse=True)
    a, b = [], []
    for s in sig:
        _, p1, p2, _ = ev.derivatives(s)
        a.append(-s * p1)
        b.append(s * s * p2)
    ok_a = _strictly_increasing(a) and a[-1] >= growth_floor * a[0]
    ok_b = _strictly_increasing(b) and b[-1] >= growth_floor * b[0]
    note = "" if ok_a and ok_b else "sequence bounded or not monotone on the grid"
    return CheckReport("alpha", ok_a and ok_b, sig, {"-sigma*phi1": a, "sigma^2*phi2": b}, note)


def check_beta(sys: FrequencySystem, sigmas, threshold_factor: float = 10.0) -> CheckReport:
    """Assumption (beta): ``|sigma phi''' / phi''|`` stays bounded as sigma decreases.

    Passes when the maximum over the grid is at most ``threshold_factor``
    times its value at the largest sigma.
    """
    ev = PhiEvaluator(sys)
    sig = sorted((float(s) for s in sigmas), reverse=True)
    r = []
    for s in sig:
        _, _, p2, p3 = ev.derivatives(s)
        r.append(abs(s * p3 / p2))
    passed = max(r) <= threshold_factor * r[0]
    return CheckReport("beta", passed, sig, {"|sigma*phi3/phi2|": r})


def check_gamma(sys: FrequencySystem, delta: float, sigmas, xs=None, sigma0: float | None = None) -> CheckReport:
    """Assumption (gamma) as a falsifier: look for zeros of ``Im phi'(sigma + i x sigma)``.

    ``Im phi'`` is odd in x, so the sign must be constant on ``0 < x <= delta``
    and opposite on the negative side. A zero or a sign change between grid
    points at any scanned sigma fails the check. With ``sigma0`` given only
    grid points ``sigma < sigma0`` are scanned; otherwise every grid point is.

    ``values["zeros"]`` lists ``(sigma, x_left, x_right)`` brackets and
    ``values["sigma0"]`` is the largest grid sigma below which the scanned
    grid showed no zero (None if the smallest sigma already has one). For
    power-law systems the ratio against ``C sigma^-beta x h(x)`` is reported.
    """
    ev = PhiEvaluator(sys)
    if xs is None:
        xs = np.linspace(delta / 64, delta, 64)
    xs = np.asarray(sorted(abs(float(x)) for x in xs if 0 < abs(x) <= delta), dtype=float)
    xs = np.unique(xs)
    full = np.concatenate([-xs[::-1], xs])
    sig = sorted((float(s) for s in sigmas if sigma0 is None or s < sigma0), reverse=True)
    values: dict[str, list] = {"min_pos": [], "max_neg": [], "zeros": []}
    asym = sys.kind == "powerlaw"
    if asym:
        beta, C = powerlaw_constant(sys.params["A"], sys.params["alpha"])
        values["max_asym_dev"] = []
    bad_sigmas = []
    for s in sig:
        im = np.array([ev.im_phi_prime(s, x) for x in full])
        pos, neg = im[full > 0], im[full < 0]
        values["min_pos"].append(float(pos.min()))
        values["max_neg"].append(float(neg.max()))
        sign = np.sign(pos)
        # a zero at a grid point or between neighbours; the negative side mirrors by oddness
        flips = [i for i in range(len(xs) - 1) if sign[i] * sign[i + 1] <= 0]
        if sign[-1] == 0 or np.any(np.sign(neg[::-1]) != -sign):
            flips = flips or [len(xs) - 1]
        for i in flips:
            values["zeros"].append((s, float(xs[i]), float(xs[min(i + 1, len(xs) - 1)])))
        if flips:
            bad_sigmas.append(s)
        if asym:
            ref = C * s**-beta * full * h_asymptotic(full, beta)
            values["max_asym_dev"].append(float(np.max(np.abs(im / ref - 1.0))))
    clean = [s for s in sig if not bad_sigmas or s < min(bad_sigmas)]
    values["sigma0"] = min(bad_sigmas) if bad_sigmas and clean else (None if bad_sigmas else sigma0)
    note = ""
    if bad_sigmas:
        note = f"Im phi' vanishes at sigma in {sorted(bad_sigmas)}"
    return CheckReport("gamma", not bad_sigmas, sig, values, note)


def asymptotic_ratio(sys: FrequencySystem, sigma: float, x: float) -> float:
    """``Im phi'(sigma + i x sigma) / (C sigma^-beta x h(x))`` for power-law systems."""
    if sys.kind != "powerlaw":
        raise ValueError("asymptotic constant only defined for power-law systems")
    beta, C = powerlaw_constant(sys.params["A"], sys.params["alpha"])
    return im_phi_prime(sys, sigma, x) / (C * sigma**-beta * x * h_asymptotic(x, beta))


def laplace_tail_bound(sys: FrequencySystem, s: float, E: float) -> float:
    """Bound on ``sum over levels above E of exp(-s * energy)``.

    Uses ``exp(-s x) <= exp(-s E / 2) exp(-s x / 2)`` for ``x > E``.
    """
    return math.exp(-s * E / 2 + phi(sys, s / 2))
