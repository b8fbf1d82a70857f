"""Command line runner: ``kronlab run <experiment> [options]``.

Settings come from an optional ``--config`` file (``key = value`` lines under
any ``[section]`` headers) and are overridden by flags. Each run writes
``<experiment>.csv`` and ``<experiment>.json`` to ``--out`` (plus an SVG with
``--svg``). Exit status: 0 when every check passes, 2 when a check fails,
1 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys as _sys
import time
from pathlib import Path

import numpy as np

from . import classical, ergodic, fock, kms, tauber
from .apalgebra import TrigPolynomial, evaluate
from .counting import CountCapExceeded, PrefixTooShortError, count_N
from .emit import parse_system, write_csv, write_json, write_svg

EXPERIMENTS = (
    "count",
    "tauber-compare",
    "assumptions",
    "ergodic",
    "time-average",
    "kms",
    "skms",
    "witten",
    "nullspace",
    "classical-demo",
)

DEFAULTS = {
    "count": {"system": "powerlaw:A=1,alpha=1.5", "E": "10,20,30"},
    "tauber-compare": {"system": "powerlaw:A=1,alpha=1", "E": "50,100,200"},
    "assumptions": {"system": "powerlaw:A=1,alpha=1", "sigma": ",".join(repr(2.0**-k) for k in range(1, 13))},
    "ergodic": {"system": "powerlaw:A=1,alpha=1.5", "E": "10,20,30,40"},
    "time-average": {"system": "powerlaw:A=1,alpha=1.5", "E": "20,30", "M": "10,100,1000"},
    "kms": {"system": "powerlaw:A=1,alpha=1", "beta": "1.0"},
    "skms": {"system": "powerlaw:A=1,alpha=1", "beta": "1.0"},
    "witten": {"system": "powerlaw:A=1,alpha=1", "beta": "1.0", "boson_cutoff": "40"},
    "nullspace": {"system": "powerlaw:A=1,alpha=1", "beta": "1.0", "boson_cutoff": "3"},
    "classical-demo": {"system": "dispersion:m=1", "t": "0,0.5,1,2,4", "modes": "3"},
}

COMMON = {
    "modes": "2",
    "boson_cutoff": "4",
    "seed": "0",
    "pairs": "50",
    "tol": "1e-10",
    "delta": "4",
    "out": ".",
    "svg": "false",
    "timing": "false",
}

KEYS = ("system", "E", "beta", "sigma", "t", "M") + tuple(COMMON)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(_sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kronlab", description="Quantized Kronecker flow experiments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    r = sub.add_parser("run", help="run one experiment")
    r.add_argument("experiment", choices=EXPERIMENTS)
    r.add_argument("--config", type=Path, help="key=value file with [section] headers")
    r.add_argument("--system", help="e.g. powerlaw:A=1,alpha=1.5 or dispersion:m=3.14")
    r.add_argument("--E", dest="E", help="comma-separated energy grid")
    r.add_argument("--beta", help="comma-separated inverse temperatures")
    r.add_argument("--sigma", help="comma-separated sigma grid")
    r.add_argument("--t", dest="t", help="comma-separated times")
    r.add_argument("--M", dest="M", help="comma-separated averaging times")
    r.add_argument("--modes", help="number of frequency pairs K")
    r.add_argument("--boson-cutoff", dest="boson_cutoff", help="occupancy cut per bosonic mode")
    r.add_argument("--seed", help="random seed (default 0)")
    r.add_argument("--pairs", help="random operator pairs")
    r.add_argument("--tol", help="defect tolerance")
    r.add_argument("--delta", help="x range for the gamma scan")
    r.add_argument("--out", help="output directory")
    r.add_argument("--svg", action="store_const", const="true", help="also write an SVG plot")
    r.add_argument("--timing", action="store_const", const="true", help="record wall-clock times")
    return p


def resolve_config(experiment: str, config_file: Path | None, flags: dict) -> dict:
    cfg = dict(COMMON)
    cfg.update(DEFAULTS[experiment])
    if config_file is not None:
        parser = configparser.ConfigParser()
        parser.optionxform = str
        try:
            with open(config_file) as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise UsageError(f"cannot read config {config_file}: {exc}") from exc
        for section in parser.sections():
            for key, value in parser.items(section):
                key = key.replace("-", "_")
                if key not in KEYS:
                    raise UsageError(f"unknown config key {key!r} in [{section}]")
                cfg[key] = value
    for key, value in flags.items():
        if value is not None:
            cfg[key] = value
    return cfg


def _floats(cfg, key) -> list[float]:
    try:
        vals = [float(v) for v in str(cfg[key]).split(",") if v.strip()]
    except (KeyError, ValueError) as exc:
        raise UsageError(f"grid {key!r} must be a comma-separated list of numbers") from exc
    if not vals:
        raise UsageError(f"grid {key!r} is empty")
    return vals


def _int(cfg, key) -> int:
    try:
        return int(cfg[key])
    except ValueError as exc:
        raise UsageError(f"{key} must be an integer") from exc


def _bool(cfg, key) -> bool:
    return str(cfg[key]).strip().lower() in ("1", "true", "yes", "on")


def _system(cfg):
    try:
        return parse_system(cfg["system"])
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad system spec {cfg.get('system')!r}: {exc}") from exc


# experiments --------------------------------------------------------------
# each returns (header, rows, results, passed, svg) with svg None or
# (series, xlabel, ylabel, title, loglog)


def _count(cfg):
    sys = _system(cfg)
    timing = _bool(cfg, "timing")
    rows = []
    for E in _floats(cfg, "E"):
        t0 = time.perf_counter()
        res = count_N(sys.extend_beyond(E), E)
        ms = (time.perf_counter() - t0) * 1e3
        rows.append([E, res.N, ms if timing else ""])
    svg = ([("N(E)", [r[0] for r in rows], [r[1] for r in rows])], "E", "N(E)", "lattice-point count", False)
    return ["E", "N", "runtime_ms"], rows, {"N": [r[1] for r in rows]}, True, svg


def _tauber(cfg):
    sys = _system(cfg)
    table = tauber.asymptotic_vs_exact(sys, _floats(cfg, "E"))
    rows = [[r.E, r.N_exact, r.N_tilde, r.ratio, r.sigma_E] for r in table]
    ratios = [r.ratio for r in table]
    ok = all(math.isfinite(x) and x > 0 for x in ratios)
    svg = ([("N/N~", [r.E for r in table], ratios)], "E", "N_exact / N_tilde", "saddle-point ratio", True)
    return ["E", "N_exact", "N_tilde", "ratio", "sigma_E"], rows, {"ratio": ratios}, ok, svg


def _assumptions(cfg):
    sys = _system(cfg)
    sig = _floats(cfg, "sigma")
    a = tauber.check_alpha(sys, sig)
    b = tauber.check_beta(sys, sig)
    g = tauber.check_gamma(sys, float(cfg["delta"]), sig)
    va, vb, vg = a.values, b.values, g.values
    rows = [
        [s, va["-sigma*phi1"][i], va["sigma^2*phi2"][i], vb["|sigma*phi3/phi2|"][i], vg["min_pos"][i]]
        for i, s in enumerate(a.sigmas)
    ]
    results = {
        "alpha": a.passed,
        "beta": b.passed,
        "gamma": g.passed,
        "gamma_zeros": [list(z) for z in vg["zeros"]],
        "gamma_sigma0": vg["sigma0"],
    }
    header = ["sigma", "minus_sigma_phi1", "sigma2_phi2", "abs_sigma_phi3_over_phi2", "min_im_phi1_pos_x"]
    return header, rows, results, a.passed and b.passed and g.passed, None


def _cos_mode0(sys):
    return TrigPolynomial(sys, {((0, 1),): 1.0, ((0, -1),): 1.0})


def _ergodic(cfg):
    sys = _system(cfg)
    f = _cos_mode0(sys)
    rep = ergodic.classical_limit_table(sys, ergodic.semicommutator_observable(f, f), _floats(cfg, "E"))
    rows = [[E, N, v.real, v.imag, 0.0] for E, N, v in zip(rep.E, rep.N, rep.values)]
    mags = [abs(v) for v in rep.values]
    ok = all(x >= y for x, y in zip(mags, mags[1:])) and mags[-1] < 0.3
    svg = ([("|tau_E|", rep.E, mags)], "E", "|tau_E(T(f)T(f)-T(f^2))|", "classical limit", False)
    header = ["E", "N", "re_tau_E", "im_tau_E", "predicted_limit"]
    return header, rows, {"abs_tau": mags}, ok, svg


def _time_average(cfg):
    sys = _system(cfg)
    f = ergodic.ergodic_test_function(sys)
    C = ergodic.ergodic_constant(f)
    tab = ergodic.ergodic_table(sys, f, _floats(cfg, "E"), _floats(cfg, "M"))
    rows, ok = [], True
    for E, row in zip(tab["E"], tab["defect"]):
        scaled = [d * M * M for d, M in zip(row, tab["M"])]
        ok &= max(scaled) <= C and max(scaled) <= 3.0 * min(scaled)
        rows.extend([E, M, d, s] for M, d, s in zip(tab["M"], row, scaled))
    svg = (
        [(f"E={E:g}", tab["M"], row) for E, row in zip(tab["E"], tab["defect"])],
        "M",
        "tau_E(A*A)",
        "time-average defect",
        True,
    )
    return ["E", "M", "tau_AA", "M2_tau_AA"], rows, {"C": C}, ok, svg


def _kms(cfg):
    sys = _system(cfg)
    tol = float(cfg["tol"])
    space = fock.FockSpace.occupancy_cut(sys, _int(cfg, "modes"), _int(cfg, "boson_cutoff"), "boson")
    rng = np.random.default_rng(_int(cfg, "seed"))
    rows, reports = [], []
    for beta in _floats(cfg, "beta"):
        ctx = kms.ThermalContext(space, beta)
        worst = 0.0
        for i in range(_int(cfg, "pairs")):
            d = kms.kms_check(ctx, kms.random_operator(space, rng), kms.random_operator(space, rng))
            rows.append([beta, i, d])
            worst = max(worst, d)
        reports.append(kms.report("kms", beta, space.dim, worst, tol))
    return ["beta", "pair", "defect"], rows, {"reports": reports}, all(r["pass"] for r in reports), None


def _skms(cfg):
    sys = _system(cfg)
    tol = float(cfg["tol"])
    space = fock.FockSpace.occupancy_cut(sys, _int(cfg, "modes"), _int(cfg, "boson_cutoff"), "graded")
    Q = fock.supercharge(space)
    rng = np.random.default_rng(_int(cfg, "seed"))
    rows, reports = [], []
    for beta in _floats(cfg, "beta"):
        ctx = kms.ThermalContext(space, beta)
        worst_d = worst_t = 0.0
        for i in range(_int(cfg, "pairs")):
            kind = "even" if i % 2 == 0 else "odd"
            a = kms.random_operator(space, rng, kind=kind)
            b = kms.random_operator(space, rng, kind="odd" if i % 3 else "even")
            dd = abs(kms.skms(ctx, kms.super_d(Q, a)))
            tw = kms.twisted_kms_defect(ctx, a, b)
            rows.append([beta, i, dd, tw])
            worst_d, worst_t = max(worst_d, dd), max(worst_t, tw)
        reports.append(kms.report("mu(da)=0", beta, space.dim, worst_d, tol))
        reports.append(kms.report("twisted-kms", beta, space.dim, worst_t, tol))
    header = ["beta", "pair", "mu_da", "twisted_defect"]
    return header, rows, {"reports": reports}, all(r["pass"] for r in reports), None


def _witten(cfg):
    sys = _system(cfg)
    K, M = _int(cfg, "modes"), _int(cfg, "boson_cutoff")
    space = fock.FockSpace.occupancy_cut(sys, K, M, "graded")
    rows, ok = [], True
    for beta in _floats(cfg, "beta"):
        idx = kms.witten_index(kms.ThermalContext(space, beta))
        bound = 2 * K * math.exp(-beta * sys.omegas[0] * (M + 1))
        ok &= abs(idx - 1.0) <= bound
        rows.append([beta, idx, abs(idx - 1.0), bound])
    return ["beta", "index", "abs_index_minus_1", "bound"], rows, {"index": [r[1] for r in rows]}, ok, None


def _nullspace(cfg):
    sys = _system(cfg)
    beta = _floats(cfg, "beta")[0]
    M = _int(cfg, "boson_cutoff")
    one = sys.prefix(1)
    cases = [
        ("fermion-mode", fock.FockSpace.occupancy_cut(one, 1, 1, "fermion")),
        ("susy-mode", fock.FockSpace.occupancy_cut(one, 1, M, "graded")),
    ]
    rows = [[name, s.dim, kms.pre_skms_nullspace(s, beta)] for name, s in cases]
    ok = all(r[2] == 1 for r in rows)
    return ["case", "dim", "nullity"], rows, {"nullity": {r[0]: r[2] for r in rows}}, ok, None


def _classical(cfg):
    sys = _system(cfg)
    K = _int(cfg, "modes")
    rng = np.random.default_rng(_int(cfg, "seed"))
    f = classical.ClassicalField.random(sys, K, rng)
    xs = np.linspace(0.0, 2.0, 5)
    times = _floats(cfg, "t")
    rows = []
    for t in times:
        phi, _ = classical.evolve(f, t)
        vals = np.real(evaluate(phi, xs))
        rows.append([t, classical.energy(f, t)] + [float(v) for v in vals])
    e0 = classical.action_energy(f)
    ok = all(abs(r[1] - e0) <= 1e-10 * max(1.0, e0) for r in rows)
    header = ["t", "energy"] + [f"phi_x{i}" for i in range(len(xs))]
    svg = ([(f"x={x:g}", times, [r[2 + i] for r in rows]) for i, x in enumerate(xs)], "t", "phi", "waveforms", False)
    return header, rows, {"action_energy": e0}, ok, svg


RUNNERS = {
    "count": _count,
    "tauber-compare": _tauber,
    "assumptions": _assumptions,
    "ergodic": _ergodic,
    "time-average": _time_average,
    "kms": _kms,
    "skms": _skms,
    "witten": _witten,
    "nullspace": _nullspace,
    "classical-demo": _classical,
}


def run(experiment: str, cfg: dict) -> int:
    """Run one experiment with a resolved config; returns the exit code."""
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    try:
        header, rows, results, passed, svg = RUNNERS[experiment](cfg)
    except (CountCapExceeded, PrefixTooShortError, tauber.SeriesTruncationError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    write_csv(out / f"{experiment}.csv", header, rows)
    echo = {k: cfg[k] for k in sorted(cfg) if k != "out"}
    write_json(out / f"{experiment}.json", {"experiment": experiment, "config_echo": echo, "results": results, "pass": passed})
    if _bool(cfg, "svg") and svg is not None:
        series, xl, yl, title, loglog = svg
        write_svg(out / f"{experiment}.svg", series, xl, yl, title, loglog)
    return 0 if passed else 2


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    flags = {k: getattr(args, k) for k in KEYS if hasattr(args, k)}
    try:
        cfg = resolve_config(args.experiment, args.config, flags)
        code = run(args.experiment, cfg)
    except UsageError as exc:
        print(f"kronlab: {exc}", file=_sys.stderr)
        return 1
    status = {0: "pass", 2: "FAIL"}[code]
    print(f"{args.experiment}: {status} -> {Path(cfg['out']) / (args.experiment + '.json')}")
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
