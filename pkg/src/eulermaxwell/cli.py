"""Command-line entry point: ``eulermaxwell <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import harness, stability
from .model import CARBON_ION_MASS, ELECTRON_MASS, compute_scaling

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_MASSES = {"electron": ELECTRON_MASS, "carbon": CARBON_ION_MASS}


def _floats(text: str) -> list:
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of numbers, got {text!r}") from None


def _ints(text: str) -> list:
    return [int(v) for v in _floats(text)]


def _triple(text: str) -> tuple:
    parts = _ints(text)
    if len(parts) != 3 or any(p not in (0, 1) for p in parts):
        raise argparse.ArgumentTypeError("scheme must be three 0/1 flags such as 1,1,1")
    return tuple(parts)


def _mass(text: str) -> float:
    if text in _MASSES:
        return _MASSES[text]
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"mass must be a number in kg or one of {sorted(_MASSES)}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eulermaxwell", description="1D Euler-Maxwell solver")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one experiment from a key = value config file")
    r.add_argument("--config", required=True)
    r.add_argument("--out", default=None, help="output directory (defaults to output_dir in the config)")

    c = sub.add_parser("converge", help="L1 convergence study against a fine classical reference")
    c.add_argument("--case", required=True, choices=harness.CASES)
    c.add_argument("--lambda", dest="lam", type=float, required=True)
    c.add_argument("--resolutions", type=_ints, required=True)
    c.add_argument("--reference", type=int, required=True)
    c.add_argument("--scheme", choices=("ap", "classical"), default="ap")
    c.add_argument("--fluids", type=int, choices=(1, 2), default=1)
    c.add_argument("--fields", default="n,qx")
    c.add_argument("--t-end", type=float, default=None)
    c.add_argument("--out", default=None, help="write the JSON table here instead of stdout")

    s = sub.add_parser("stability", help="maximum amplification factor over a (lambda, dt/h) grid")
    s.add_argument("--scheme", type=_triple, required=True)
    s.add_argument("--lambda-list", type=_floats, required=True)
    s.add_argument("--dt-over-h", type=_floats, required=True)
    s.add_argument("--h", type=float, default=0.01)
    s.add_argument("--T", type=float, default=1.0)
    s.add_argument("--gamma", type=float, default=None)
    s.add_argument("--n-xi", type=int, default=2049)
    s.add_argument("--out", default=None)

    d = sub.add_parser("dispersion", help="continuous dispersion relation samples")
    d.add_argument("--lambda", dest="lam", type=float, required=True)
    d.add_argument("--t", dest="T", type=float, default=1.0)
    d.add_argument("--xi-max", type=float, required=True)
    d.add_argument("--n", type=int, default=101)
    d.add_argument("--out", default=None)

    sc = sub.add_parser("scaling", help="reference units for physical inputs")
    sc.add_argument("--n0", type=float, required=True, help="density in m^-3")
    sc.add_argument("--T0", type=float, required=True, help="temperature in eV")
    sc.add_argument("--x0", type=float, required=True, help="length scale in m")
    sc.add_argument("--mass", type=_mass, default=ELECTRON_MASS, help="kg, or electron / carbon")
    return p


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def cmd_run(args) -> int:
    cfg = harness.load_config(args.config)
    result = harness.run_experiment(cfg)
    out = args.out or cfg.output_dir
    if out:
        for path in harness.emit_outputs(result, out):
            print(path)
    print(json.dumps({"steps": result.steps, "t": result.final.t, "gauss_drift": result.gauss_drift_max,
                      "wall_clock_seconds": result.wall_time, "flags": result.flags}))
    return EXIT_OK


def cmd_converge(args) -> int:
    template = harness.ExperimentConfig(case=args.case, lam=args.lam, scheme=args.scheme, fluids=args.fluids,
                                        t_end=args.t_end)
    fields_ = tuple(f.strip() for f in args.fields.split(",") if f.strip())
    res = harness.convergence_study(template, args.resolutions, args.reference, fields_)
    table = {"resolutions": res.resolutions, "h": res.h, "errors": res.errors, "slopes": res.slopes,
             "reference_cells": res.reference_cells}
    fh = _open_out(args.out)
    try:
        json.dump(table, fh, indent=2)
        fh.write("\n")
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def cmd_stability(args) -> int:
    rows = stability.stability_region_scan(args.scheme, args.lambda_list, args.dt_over_h, args.h,
                                           args.gamma, args.T, args.n_xi)
    fh = _open_out(args.out)
    try:
        stability.write_stability_csv(rows, fh)
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def cmd_dispersion(args) -> int:
    xs = np.linspace(0.0, args.xi_max, args.n)
    fh = _open_out(args.out)
    try:
        w = csv.writer(fh)
        w.writerow(["xi", "omega_em", "omega_es"])
        for xi in xs:
            m = stability.dispersion_modes(args.lam, args.T, xi)
            w.writerow(["%.17g" % xi, "%.17g" % m.em_plus.imag, "%.17g" % m.es_plus.imag])
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def cmd_scaling(args) -> int:
    s = compute_scaling(args.x0, args.n0, args.T0, args.mass)
    print(json.dumps({"x0": s.x0, "n0": s.n0, "T0_K": s.T0, "mass": s.mass, "u0": s.u0, "t0": s.t0,
                      "E0": s.E0, "B0": s.B0, "alpha": s.alpha, "beta": s.beta, "lambda": s.lam}, indent=2))
    return EXIT_OK


_COMMANDS = {"run": cmd_run, "converge": cmd_converge, "stability": cmd_stability,
             "dispersion": cmd_dispersion, "scaling": cmd_scaling}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except harness.NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (harness.ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
