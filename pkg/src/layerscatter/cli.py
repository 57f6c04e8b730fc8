"""Command line interface: ``layerscatter <subcommand> [options]``.

Each subcommand writes plot-ready CSV (``--out``, default stdout) and an
optional JSON run report (``--report``). Exit codes: 0 ok, 2 configuration,
3 numeric, 4 inconsistent data, 5 resource cap.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time

import numpy as np

from . import io as lsio
from .errors import ConfigError, LayerScatterError
from .experiments import born_figures, node_grid_profile, noise_sweep
from .forward import forward_scatter, relative_l2, spectrum
from .inverse import (add_noise, born_invert, invert_scatter, layer_strip,
                      short_range_invert)
from .media import ImpedanceProfile, StepMedium
from .moebius import step_reflection
from .opuc import opuc_reflection, szego_sum
from .specfun import classical_trace_check, singular_trace


def _default_threads() -> int:
    raw = os.environ.get("LAYERSCATTER_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _medium(args):
    return lsio.parse_profile(args.profile, args.x0, args.x1)


def _profile_only(args) -> ImpedanceProfile:
    m = _medium(args)
    if not isinstance(m, ImpedanceProfile):
        raise ConfigError("this command needs a continuous profile")
    return m


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items())
            if k not in ("func", "out", "report", "threads")}


def _finish(args, command, results, t0, identity=None):
    rep = lsio.make_report(command, _config(args), results,
                           wall_time=time.perf_counter() - t0, identity=identity)
    lsio.write_report(args.report, rep)
    return 0


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_forward(args) -> int:
    t0 = time.perf_counter()
    src = _medium(args)
    if args.grid == "nodes":
        if not isinstance(src, ImpedanceProfile):
            raise ConfigError("--grid nodes needs a named profile")
        src = node_grid_profile(src, args.n)
    data = forward_scatter(src, n=args.n, window=args.window)
    lsio.write_csv(args.out, [data.times, data.values], lsio.CSV_HEADERS["data"])
    return _finish(args, "forward", {
        "n": data.n, "delta": data.delta, "singular": data.singular,
        "max_abs_a": float(np.max(np.abs(data.a))) if data.n else 0.0}, t0)


def cmd_invert(args) -> int:
    t0 = time.perf_counter()
    t, d = lsio.read_csv(args.data, lsio.CSV_HEADERS["data"])
    if args.noise:
        d = add_noise(d, args.noise, args.seed)
    inv = invert_scatter((t, d), x0=args.x0 or 0.0, zeta0=args.zeta0,
                         strict=not args.lenient)
    lsio.write_csv(args.out, [inv.midpoints, inv.zeta], lsio.CSV_HEADERS["profile"])
    results = {"n": inv.n, "delta": inv.delta, **inv.diagnostics}
    if args.truth:
        truth = lsio.parse_profile(args.truth, args.x0, None)
        results["relative_l2_error"] = relative_l2(inv.zeta, truth.zeta(inv.midpoints))
    return _finish(args, "invert", results, t0)


def cmd_spectrum(args) -> int:
    t0 = time.perf_counter()
    m = _medium(args)
    om = np.linspace(-args.band, args.band, args.count)
    R = spectrum(m, om, n=args.n, threads=args.threads)
    lsio.write_csv(args.out, lsio.complex_columns(om, R), lsio.CSV_HEADERS["spectrum"])
    return _finish(args, "spectrum", {"count": int(om.size),
                                      "max_abs_R": float(np.max(np.abs(R)))}, t0)


def cmd_trace(args) -> int:
    t0 = time.perf_counter()
    m = _medium(args)
    om = np.linspace(-args.band, args.band, args.count)
    if isinstance(m, StepMedium) or not m.is_continuous:
        if isinstance(m, ImpedanceProfile):
            raise ConfigError("trace takes a step medium or a continuous profile")
        R = step_reflection(m, om)
        lhs, L = singular_trace(om, R)
        rhs = float(-np.sum(np.log1p(-m.reflectivities ** 2)))
        results = {"kind": "singular", "L": L}
    else:
        R = spectrum(m, om, n=args.n, threads=args.threads)
        x = np.linspace(m.interval.x0, m.interval.x1, 20 * args.n + 1)
        lhs, rhs = classical_trace_check(om, R, x, m.alpha(x))
        results = {"kind": "classical"}
    lsio.write_csv(args.out, lsio.complex_columns(om, R), lsio.CSV_HEADERS["spectrum"])
    return _finish(args, "trace", results, t0, identity=(lhs, rhs))


def cmd_szego(args) -> int:
    t0 = time.perf_counter()
    r = np.asarray(lsio.parse_floats(args.r))
    lhs, rhs = szego_sum(r, args.delta, rtol=args.rtol)
    half = math.pi / (2.0 * args.delta)
    om = np.linspace(-half, half, args.count)
    R = opuc_reflection(r, args.delta, om)
    lsio.write_csv(args.out, lsio.complex_columns(om, R), lsio.CSV_HEADERS["spectrum"])
    return _finish(args, "szego", {"n": int(r.size)}, t0, identity=(lhs, rhs))


def cmd_layerstrip(args) -> int:
    t0 = time.perf_counter()
    m = _medium(args)
    if not isinstance(m, StepMedium):
        raise ConfigError("layer stripping needs a step medium description")
    if args.band:
        res = layer_strip(lambda w, xi: step_reflection(m, w), x0=m.interval.x0,
                          zeta0=m.values[0], band=args.band,
                          lambda_max=args.lambda_max or 2.0 * m.interval.length)
    else:
        res = layer_strip(m, zeta0=m.values[0])
    out = res.medium
    xs = np.concatenate(([out.interval.x0], out.jumps))
    lsio.write_csv(args.out, [xs, np.asarray(out.values)], lsio.CSV_HEADERS["profile"])
    results = {"jumps": list(res.jumps), "reflectivities": res.reflectivities,
               "complete": res.complete, "tolerance": res.tolerance, "band": res.band}
    if len(res.jumps) == m.n:
        results["max_jump_error"] = float(np.max(np.abs(np.subtract(res.jumps, m.jumps))))
        results["max_reflectivity_error"] = float(
            np.max(np.abs(res.reflectivities - m.reflectivities)))
    return _finish(args, "layerstrip", results, t0)


def cmd_born(args) -> int:
    t0 = time.perf_counter()
    p = _profile_only(args)
    residual, inv_err = born_figures(p, args.n)
    data = forward_scatter(node_grid_profile(p, args.n), n=args.n)
    y, zb = born_invert(data, zeta0=float(p.zeta(p.interval.x0)))
    lsio.write_csv(args.out, [y, zb], lsio.CSV_HEADERS["profile"])
    return _finish(args, "born", {"data_residual": residual,
                                  "inversion_error": inv_err}, t0)


def cmd_shortrange(args) -> int:
    t0 = time.perf_counter()
    p = _profile_only(args)
    data = forward_scatter(p, n=args.n)
    l1, l2 = p.alpha_norms()
    x0 = p.interval.x0
    zeta0 = float(p.zeta(x0 + 0.5 * data.delta))
    ys = np.atleast_1d(np.asarray(lsio.parse_floats(args.y)))
    vals = np.array([short_range_invert(data, x0, zeta0, l1, l2, y, order=args.order)
                     for y in ys])
    truth = p.zeta(ys)
    lsio.write_csv(args.out, [ys, vals], lsio.CSV_HEADERS["profile"])
    return _finish(args, "shortrange", {"truth": truth,
                                        "max_relative_gap": float(np.max(np.abs(vals / truth - 1)))},
                   t0)


def cmd_noise_sweep(args) -> int:
    t0 = time.perf_counter()
    p = _profile_only(args)
    seeds, errs = noise_sweep(p, args.n, args.fraction, range(args.seed, args.seed + args.seeds),
                              threads=args.threads)
    ok = [e for e in errs if e is not None]
    col = np.array([np.nan if e is None else e for e in errs])
    lsio.write_csv(args.out, [np.asarray(seeds, dtype=float), col], ("seed", "error"))
    return _finish(args, "noise-sweep", {
        "median_error": float(np.median(ok)) if ok else None,
        "aborts": len(errs) - len(ok)}, t0)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="layerscatter", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_, profile=True):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--out", default="-", help="CSV output path (default stdout)")
        sp.add_argument("--report", default=None, help="JSON report path")
        sp.add_argument("--threads", type=_positive_int, default=_default_threads())
        if profile:
            sp.add_argument("--profile", default="chirp",
                            help="const[:v], exp:a0, chirp[:a,b,c,d], or a CSV/JSON file")
            sp.add_argument("--x0", type=float, default=None)
            sp.add_argument("--x1", type=float, default=None)
        return sp

    sp = add("forward", cmd_forward, "echo data of an impedance profile")
    sp.add_argument("--n", type=_positive_int, default=1000)
    sp.add_argument("--window", type=_positive_int, default=1)
    sp.add_argument("--grid", choices=("cells", "nodes"), default="cells",
                    help="cells: delta=L/(n+1); nodes: delta=L/n")

    sp = add("invert", cmd_invert, "impedance from echo data", profile=False)
    sp.add_argument("--data", required=True, help="t,d CSV")
    sp.add_argument("--x0", type=float, default=0.0)
    sp.add_argument("--zeta0", type=float, default=1.0)
    sp.add_argument("--truth", default=None, help="profile descriptor to score against")
    sp.add_argument("--noise", type=float, default=0.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--lenient", action="store_true",
                    help="truncate instead of failing on |r| >= 1")

    sp = add("spectrum", cmd_spectrum, "reflection coefficient on a frequency band")
    sp.add_argument("--n", type=_positive_int, default=4000)
    sp.add_argument("--band", type=float, default=8.0)
    sp.add_argument("--count", type=int, default=1000)

    sp = add("trace", cmd_trace, "singular or classical trace identity")
    sp.add_argument("--n", type=_positive_int, default=4000)
    sp.add_argument("--band", type=float, default=100.0)
    sp.add_argument("--count", type=int, default=100001)

    sp = add("szego", cmd_szego, "Szego sum rule for a list of reflectivities", profile=False)
    sp.add_argument("--r", required=True, help="comma separated reflectivities")
    sp.add_argument("--delta", type=float, default=1.0)
    sp.add_argument("--rtol", type=float, default=1e-10)
    sp.add_argument("--count", type=int, default=512)

    sp = add("layerstrip", cmd_layerstrip, "peel interfaces off a step medium")
    sp.add_argument("--band", type=float, default=None,
                    help="use Cesaro means over (-band, band) instead of the exact series")
    sp.add_argument("--lambda-max", type=float, default=None)

    sp = add("born", cmd_born, "Born approximation and Born inversion")
    sp.add_argument("--n", type=_positive_int, default=2000)

    sp = add("shortrange", cmd_shortrange, "short-range inversion series")
    sp.add_argument("--n", type=_positive_int, default=1000)
    sp.add_argument("--y", required=True, help="comma separated depths")
    sp.add_argument("--order", type=_positive_int, default=4)

    sp = add("noise-sweep", cmd_noise_sweep, "reconstruction error under gaussian noise")
    sp.add_argument("--n", type=_positive_int, default=2000)
    sp.add_argument("--fraction", type=float, default=0.25)
    sp.add_argument("--seeds", type=_positive_int, default=20)
    sp.add_argument("--seed", type=int, default=0, help="first seed")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LayerScatterError as exc:
        print(f"layerscatter: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"layerscatter: error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"layerscatter: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
