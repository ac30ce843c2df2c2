"""Command-line front end: every analysis as a subcommand with file outputs.

Each run writes exactly one output file (CSV by default, JSON mirrors the
columns as records) plus a run manifest next to it recording all inputs, the
tool version and the wall time.  Identical configurations (including the
seed) produce byte-identical output files; floats are printed with 17
significant digits so values round-trip exactly.

Exit codes: 0 success, 2 bad arguments, 3 domain error, 4 numeric failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from enum import Enum
from pathlib import Path

import numpy as np

from . import __version__
from .bifurcation import (
    BifurcationKind,
    BifurcationPoint,
    detect_bifurcation_numerically,
    flip_point,
    fold_in_k,
    fold_points,
)
from .core import (
    CRITICAL_POINT,
    BracketError,
    DomainError,
    MapParams,
    NumericRangeError,
    map_step,
)
from .fixed_points import dynamical_core, find_fixed_points
from .misiurewicz import (
    bracket_scan_for_misiurewicz,
    gamma_curve,
    misiurewicz_search,
)
from .model2d import FullParams, iterate2d, mmo_trace
from .orbits import (
    birkhoff_histogram,
    detect_periodic_attractor,
    iterate,
    itinerary,
    lyapunov,
)
from .topochaos import chaos_scan

OUT_DIR_ENV = "CHIALVO_OUT_DIR"


class UsageError(Exception):
    """Bad argument combinations not expressible in argparse."""


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, Enum):
        return str(v.value)
    if isinstance(v, float):
        return f"{v:.17g}"
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, float):
        return v
    return str(v)


def _write_table(path: Path, fmt: str, header: list[str], rows: list[list]) -> None:
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
    else:
        records = [
            {col: _jsonable(v) for col, v in zip(header, row)} for row in rows
        ]
        with open(path, "w") as fh:
            json.dump(records, fh, indent=1)
            fh.write("\n")


def _bif_row(b: BifurcationPoint) -> list:
    return [
        b.kind, b.wrt, b.x0, b.param0,
        b.condition_a1, b.condition_a2, b.condition_b1, b.condition_b2,
        b.criticality_value, b.criticality,
    ]


_BIF_HEADER = [
    "kind", "wrt", "x0", "param0",
    "condition_a1", "condition_a2", "condition_b1", "condition_b2",
    "criticality_value", "criticality",
]


def _grid(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0.0:
        raise DomainError(f"step must be positive, got {step!r}")
    if hi < lo:
        raise DomainError(f"empty range ({lo!r}, {hi!r})")
    n = int(np.floor((hi - lo) / step + 1e-9))
    return [lo + i * step for i in range(n + 1)]


def _core_range(p: MapParams) -> tuple[float, float]:
    core = dynamical_core(p)
    return core.lo, core.hi


# ---------------------------------------------------------------- handlers

def _run_fixed_points(cfg):
    p = MapParams(cfg["r"], cfg["k"])
    rows = [
        [q.x, q.multiplier, q.stability, q.branch, q.degenerate]
        for q in find_fixed_points(p).points
    ]
    return ["x", "multiplier", "stability", "branch", "degenerate"], rows


def _run_core(cfg):
    p = MapParams(cfg["r"], cfg["k"])
    core = dynamical_core(p)
    row = [cfg["r"], cfg["k"], core.lo, core.hi, core.case,
           core.contains_unique_fixed_point]
    return ["r", "k", "lo", "hi", "case", "contains_unique_fixed_point"], [row]


def _run_flip(cfg):
    return _BIF_HEADER, [_bif_row(flip_point(cfg["k"]))]


def _run_fold(cfg):
    return _BIF_HEADER, [_bif_row(b) for b in fold_points(cfg["k"])]


def _run_fold_k(cfg):
    return _BIF_HEADER, [_bif_row(fold_in_k(cfg["r"]))]


def _run_bifurcate_numeric(cfg):
    kind = BifurcationKind(cfg["kind"])
    b = detect_bifurcation_numerically(cfg["k"], (cfg["r_lo"], cfg["r_hi"]), kind)
    return _BIF_HEADER, [_bif_row(b)]


_MIS_HEADER = ["k", "r_star", "z", "zeta", "zeta1", "dzeta_dr", "df_dr_at_c", "gamma"]


def _mis_row(m) -> list:
    return [m.k, m.r_star, m.z, m.zeta, m.zeta1, m.dzeta_dr, m.df_dr_at_c, m.gamma]


def _run_misiurewicz(cfg):
    k = cfg["k"]
    if cfg["r_lo"] is not None and cfg["r_hi"] is not None:
        bracket = (cfg["r_lo"], cfg["r_hi"])
    else:
        found = bracket_scan_for_misiurewicz(k, (2.0, 3.2), 0.01)
        if not found:
            raise BracketError(f"no sign change of d(r) on [2, 3.2] for k={k!r}")
        bracket = found[0]
    return _MIS_HEADER, [_mis_row(misiurewicz_search(k, bracket))]


def _run_gamma_table(cfg):
    results, failures = gamma_curve((cfg["k_min"], cfg["k_max"]), cfg["k_step"])
    for k, msg in failures:
        print(f"warning: k={k:.6g} failed: {msg}", file=sys.stderr)
    return _MIS_HEADER, [_mis_row(m) for m in results]


def _run_chaos_scan(cfg):
    cells = chaos_scan(
        (cfg["r_min"], cfg["r_max"]), cfg["r_step"],
        (cfg["k_min"], cfg["k_max"]), cfg["k_step"],
    )
    rows = [
        [c.r, c.k, c.satisfied, c.margin_fc, c.margin_f3c, c.margin_order,
         c.margin_min]
        for c in cells
    ]
    return ["r", "k", "satisfied", "margin_fc", "margin_f3c", "margin_order",
            "margin_min"], rows


def _run_kneading(cfg):
    p = MapParams(cfg["r"], cfg["k"])
    x0 = map_step(p.r, p.k, CRITICAL_POINT)
    symbols = itinerary(p, x0, cfg["n"])
    return ["j", "symbol"], [[j, s] for j, s in enumerate(symbols)]


def _run_attractor(cfg):
    p = MapParams(cfg["r"], cfg["k"])
    rep = detect_periodic_attractor(
        p, max_period=cfg["max_period"], n_iter=cfg["n_iter"]
    )
    cycle = "|".join(f"{x:.17g}" for x in rep.cycle) if rep.cycle else ""
    row = [cfg["r"], cfg["k"], rep.kind, rep.period, rep.lyapunov, cycle]
    return ["r", "k", "kind", "period", "lyapunov", "cycle"], [row]


def _pick_x0(cfg, p: MapParams) -> float:
    if cfg["x0"] is not None:
        return cfg["x0"]
    lo, hi = _core_range(p)
    rng = np.random.default_rng(cfg["seed"])
    return float(lo + (hi - lo) * rng.random())


def _run_lyapunov(cfg):
    p = MapParams(cfg["r"], cfg["k"])
    x0 = _pick_x0(cfg, p)
    lam = lyapunov(p, x0, cfg["n"], cfg["transient"])
    row = [cfg["r"], cfg["k"], x0, cfg["n"], cfg["transient"], lam]
    return ["r", "k", "x0", "n", "transient", "lyapunov"], [row]


def _run_histogram(cfg):
    p = MapParams(cfg["r"], cfg["k"])
    x0 = _pick_x0(cfg, p)
    masses, edges = birkhoff_histogram(p, x0, cfg["n"], cfg["bins"])
    rows = [
        [float(edges[i]), float(edges[i + 1]), float(masses[i])]
        for i in range(len(masses))
    ]
    return ["bin_lo", "bin_hi", "mass"], rows


def _run_bifdiag(cfg):
    has_r_range = cfg["r_min"] is not None and cfg["r_max"] is not None
    has_k_range = cfg["k_min"] is not None and cfg["k_max"] is not None
    if cfg["k"] is not None and has_r_range and not has_k_range:
        axis = [(r, cfg["k"]) for r in _grid(cfg["r_min"], cfg["r_max"], cfg["r_step"])]
    elif cfg["r"] is not None and has_k_range and not has_r_range:
        axis = [(cfg["r"], k) for k in _grid(cfg["k_min"], cfg["k_max"], cfg["k_step"])]
    else:
        raise UsageError(
            "bifdiag needs either --k with an r-range or --r with a k-range"
        )
    transient, samples = cfg["transient"], cfg["samples"]
    rows = []
    for r, k in axis:
        try:
            orb = iterate(MapParams(r, k), CRITICAL_POINT, samples, transient)
        except NumericRangeError:
            rows.append([r, k, 0, float("nan"), False])
            continue
        for i, x in enumerate(orb.points):
            rows.append([r, k, i, float(x), True])
    return ["r", "k", "i", "x", "ok"], rows


def _run_cobweb(cfg):
    p = MapParams(cfg["r"], cfg["k"])
    orb = iterate(p, cfg["x0"], cfg["n"] + 1)
    pts = orb.points
    rows = []
    for i in range(cfg["n"]):
        x, x1 = float(pts[i]), float(pts[i + 1])
        rows.append([2 * i, x, x, x, x1])       # vertical to the graph
        rows.append([2 * i + 1, x, x1, x1, x1])  # horizontal to the diagonal
    return ["segment", "x_from", "y_from", "x_to", "y_to"], rows


def _run_simulate2d(cfg):
    fp = FullParams(cfg["a"], cfg["b"], cfg["c"], cfg["k"])
    tr = iterate2d(fp, cfg["x0"], cfg["y0"], cfg["n"])
    rows = [[i, float(s[0]), float(s[1])] for i, s in enumerate(tr.states)]
    return ["n", "x", "y"], rows


def _run_mmo(cfg):
    p = MapParams(cfg["r"], cfg["k"])
    orb = mmo_trace(p, cfg["x0"], cfg["n"])
    rows = [[i, float(x)] for i, x in enumerate(orb.points)]
    return ["n", "x"], rows


_HANDLERS = {
    "fixed-points": _run_fixed_points,
    "core": _run_core,
    "flip": _run_flip,
    "fold": _run_fold,
    "fold-k": _run_fold_k,
    "bifurcate-numeric": _run_bifurcate_numeric,
    "misiurewicz": _run_misiurewicz,
    "gamma-table": _run_gamma_table,
    "chaos-scan": _run_chaos_scan,
    "kneading": _run_kneading,
    "attractor": _run_attractor,
    "lyapunov": _run_lyapunov,
    "histogram": _run_histogram,
    "bifdiag": _run_bifdiag,
    "cobweb": _run_cobweb,
    "simulate2d": _run_simulate2d,
    "mmo": _run_mmo,
}


def run(config: dict) -> Path:
    """Execute one subcommand from a resolved configuration dict.

    Writes the output file and its manifest; returns the output path.  The
    manifest alone is enough to regenerate the output byte-for-byte.
    """
    command = config["command"]
    t0 = time.perf_counter()
    header, rows = _HANDLERS[command](config)
    out = config.get("out")
    fmt = config.get("format", "csv")
    if out is None:
        out_dir = Path(os.environ.get(OUT_DIR_ENV, "."))
        out = out_dir / f"{command.replace('-', '_')}.{fmt}"
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    _write_table(out, fmt, header, rows)
    wall = time.perf_counter() - t0
    manifest = {
        "tool": "chialvo",
        "version": __version__,
        "command": command,
        "config": {k: _jsonable(v) for k, v in config.items() if k != "out"},
        "output": out.name,
        "rows": len(rows),
        "wall_time_s": wall,
    }
    manifest["config"]["out"] = str(out)
    with open(Path(str(out) + ".manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return out


def run_from_manifest(path: str | Path, out: str | Path | None = None) -> Path:
    """Regenerate an output file from its manifest (optionally elsewhere)."""
    with open(path) as fh:
        manifest = json.load(fh)
    config = dict(manifest["config"])
    config["command"] = manifest["command"]
    if out is not None:
        config["out"] = str(out)
    return run(config)


# ---------------------------------------------------------------- parser

def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", type=Path, default=None, help="output file path")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--seed", type=int, default=0,
                    help="seed for random initial conditions")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="chialvo",
        description="Analysis toolkit for the 1D/2D Chialvo neuron maps",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name: str, **kwargs) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, **kwargs)
        _add_common(sp)
        return sp

    sp = cmd("fixed-points", help="locate and classify fixed points")
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--k", type=float, default=0.0)

    sp = cmd("core", help="dynamical core of the map")
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--k", type=float, default=0.0)

    sp = cmd("flip", help="flip bifurcation in r (closed form)")
    sp.add_argument("--k", type=float, default=0.0)

    sp = cmd("fold", help="fold bifurcation(s) in r (closed form)")
    sp.add_argument("--k", type=float, default=0.0)

    sp = cmd("fold-k", help="fold bifurcation in k at fixed r")
    sp.add_argument("--r", type=float, required=True)

    sp = cmd("bifurcate-numeric", help="numerical bifurcation detection in r")
    sp.add_argument("--k", type=float, default=0.0)
    sp.add_argument("--r-lo", type=float, required=True)
    sp.add_argument("--r-hi", type=float, required=True)
    sp.add_argument("--kind", choices=("flip", "fold"), required=True)

    sp = cmd("misiurewicz", help="Misiurewicz parameter search at one k")
    sp.add_argument("--k", type=float, default=0.0)
    sp.add_argument("--r-lo", type=float, default=None)
    sp.add_argument("--r-hi", type=float, default=None)

    sp = cmd("gamma-table", help="Misiurewicz/transversality table over k")
    sp.add_argument("--k-min", type=float, default=0.0)
    sp.add_argument("--k-max", type=float, default=0.58)
    sp.add_argument("--k-step", type=float, default=0.01)

    sp = cmd("chaos-scan", help="topological-chaos grid scan of the (r, k) plane")
    sp.add_argument("--r-min", type=float, required=True)
    sp.add_argument("--r-max", type=float, required=True)
    sp.add_argument("--r-step", type=float, default=0.025)
    sp.add_argument("--k-min", type=float, default=0.0)
    sp.add_argument("--k-max", type=float, default=0.35)
    sp.add_argument("--k-step", type=float, default=0.002)

    sp = cmd("kneading", help="kneading sequence (itinerary of f(c))")
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--k", type=float, default=0.0)
    sp.add_argument("--n", type=int, default=64)

    sp = cmd("attractor", help="periodic-attractor detection from the critical orbit")
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--k", type=float, default=0.0)
    sp.add_argument("--max-period", type=int, default=64)
    sp.add_argument("--n-iter", type=int, default=100_000)

    sp = cmd("lyapunov", help="Lyapunov exponent along an orbit")
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--k", type=float, default=0.0)
    sp.add_argument("--x0", type=float, default=None,
                    help="initial point (default: seeded draw from the core)")
    sp.add_argument("--n", type=int, default=100_000)
    sp.add_argument("--transient", type=int, default=1000)

    sp = cmd("histogram", help="orbit occupation histogram over the core")
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--k", type=float, default=0.0)
    sp.add_argument("--x0", type=float, default=None)
    sp.add_argument("--n", type=int, default=1_000_000)
    sp.add_argument("--bins", type=int, default=100)

    sp = cmd("bifdiag", help="bifurcation diagram dataset (attractor samples)")
    sp.add_argument("--r", type=float, default=None)
    sp.add_argument("--k", type=float, default=None)
    sp.add_argument("--r-min", type=float, default=None)
    sp.add_argument("--r-max", type=float, default=None)
    sp.add_argument("--r-step", type=float, default=0.001)
    sp.add_argument("--k-min", type=float, default=None)
    sp.add_argument("--k-max", type=float, default=None)
    sp.add_argument("--k-step", type=float, default=0.001)
    sp.add_argument("--transient", type=int, default=1000)
    sp.add_argument("--samples", type=int, default=200)

    sp = cmd("cobweb", help="cobweb segment dataset for external plotting")
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--k", type=float, default=0.0)
    sp.add_argument("--x0", type=float, required=True)
    sp.add_argument("--n", type=int, default=50)

    sp = cmd("simulate2d", help="trajectory of the full 2D model")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--k", type=float, default=0.0)
    sp.add_argument("--x0", type=float, required=True)
    sp.add_argument("--y0", type=float, required=True)
    sp.add_argument("--n", type=int, default=200)

    sp = cmd("mmo", help="1D voltage trace (mixed-mode oscillation regimes)")
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--k", type=float, default=0.0)
    sp.add_argument("--x0", type=float, required=True)
    sp.add_argument("--n", type=int, default=300)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = {k: v for k, v in vars(args).items()}
    if config.get("out") is not None:
        config["out"] = str(config["out"])
    try:
        out = run(config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except (BracketError, NumericRangeError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
