"""Deterministic CSV, JSON and SVG emission, plus system-spec strings."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .frequencies import FrequencySystem, explicit, generate


def parse_system(text: str, count: int = 64) -> FrequencySystem:
    """Build a system from ``kind:key=value,...``.

    ``powerlaw:A=1,alpha=1.5,mu=inv,c=0.2``, ``dispersion:m=3.14``,
    ``primelog`` and ``explicit:1,2.5,4`` are accepted; ``count=`` sets the
    materialized prefix length for generated kinds.
    """
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    if kind == "explicit":
        return explicit([float(v) for v in rest.split(",") if v.strip()])
    params: dict = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"malformed system parameter {item!r}; expected key=value")
        key = key.strip()
        if key == "count":
            count = int(val)
        elif key == "mu":
            params[key] = val.strip()
        else:
            params[key] = float(val)
    return generate(kind, count, **params)


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def write_csv(path: Path, header, rows) -> Path:
    """RFC-4180 CSV with a header row; floats written with ``repr``."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _jsonable(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def write_json(path: Path, payload: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
    return path


def write_svg(path: Path, series, xlabel: str, ylabel: str, title: str, loglog: bool = False) -> Path:
    """Static line plot; ``series`` is a list of ``(label, xs, ys)``.

    The hash salt and date metadata are pinned so repeated runs give the
    same bytes.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "kronlab"
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, xs, ys in series:
        ax.plot(xs, ys, marker="o", label=label)
    if loglog:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return Path(path)
