"""Command-line interface.

Subcommands: ``cycle`` (single run), ``sweep`` (figure-style grids),
``coherence``, ``disorder`` and ``verify`` (dual-route oracle grid).
Engine flags take laboratory units (kHz, microseconds).  Exit codes:
0 success, 1 usage or configuration error, 2 numerical failure,
3 I/O error.

Defaults can come from an INI config file (one section per sweep,
``--config FILE --section NAME``); explicit flags override file
values.  The default RNG seed is the ``QOTTO_SEED`` environment
variable, overridden by ``--seed``.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys

import numpy as np

from . import __version__
from .cycle import otto_threshold, run_cycle
from .coherence import stroke_coherence
from .disorder import DEFAULT_SAMPLE_STEPS, DisorderSpec, quenched_efficiency
from .errors import DegeneracyError, NumericsError, ParameterError
from .evolution import DEFAULT_STEPS
from .model import KHZ, EngineParams
from .sweep import (SweepSpec, emit_csv, emit_json, run_sweep,
                    verify_dual_route)

SEED_ENV_VAR = "QOTTO_SEED"

# Thresholds applied by the `verify` subcommand.
VERIFY_LIMITS = {
    "propagator": 1e-8,
    "matrix_elements": 1e-12,
    "first_law": 1e-12,
    "efficiency": 1e-10,
    "analytic_g1": 1e-10,
}


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="qotto",
                     description="Driven two-level Otto engine toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def engine_flags(p):
        p.add_argument("--nu-cold", type=float, default=None,
                       help="cold frequency in kHz (default 2.0)")
        p.add_argument("--nu-hot", type=float, default=None,
                       help="hot frequency in kHz (default 3.6)")
        p.add_argument("--tau", type=float, default=None,
                       help="driving time in microseconds (default 100)")
        p.add_argument("--g", type=float, default=None,
                       help="z-field to rotation-rate ratio (default 0.2)")
        p.add_argument("--p-cold", type=float, default=None,
                       help="cold excited-state population (default 0.261)")
        p.add_argument("--p-hot", type=float, default=None,
                       help="hot excited-state population (default 0.99)")
        p.add_argument("--steps", type=int, default=None,
                       help="integration steps per stroke")
        p.add_argument("--strict", action="store_true",
                       help="require step-halving convergence")
        p.add_argument("--config", default=None, help="INI defaults file")
        p.add_argument("--section", default=None,
                       help="section of the config file to use")

    def disorder_flags(p):
        p.add_argument("--sigma", type=float, default=None,
                       help="disorder strength (default 0.05)")
        p.add_argument("--dist", choices=["gaussian", "uniform"],
                       default=None, help="disorder distribution")
        p.add_argument("--samples", type=int, default=None,
                       help="Monte Carlo sample budget (default 10000)")
        p.add_argument("--method", choices=["mc", "quad"], default=None,
                       help="averaging method (default mc)")
        p.add_argument("--quadrature-order", type=int, default=None,
                       help="Gauss order per axis (default 16)")
        p.add_argument("--seed", type=int, default=None,
                       help=f"RNG seed (default ${SEED_ENV_VAR} or 12345)")
        p.add_argument("--workers", type=int, default=None,
                       help="parallel workers (default 1)")

    def output_flags(p):
        p.add_argument("--out", default=None,
                       help="output path (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"], default=None,
                       help="output format (default csv)")

    p = sub.add_parser("cycle", help="run one cycle and print the ledger")
    engine_flags(p)
    p.add_argument("--out", default=None, help="write the ledger as JSON")

    p = sub.add_parser("sweep", help="tabulate outputs over a grid")
    engine_flags(p)
    disorder_flags(p)
    output_flags(p)
    p.add_argument("--axis", choices=["tau", "p-hot", "g", "sigma"],
                   default=None, help="sweep axis (default tau)")
    p.add_argument("--grid", default=None,
                   help="grid: 'start:stop:count' or comma list "
                        "(tau in microseconds)")
    p.add_argument("--outputs", default=None,
                   help="comma list of xi,eta,delta_eta_vs_g0,"
                        "coherence,quenched_eta (default xi,eta)")

    p = sub.add_parser("coherence", help="work-stroke coherence vs tau")
    engine_flags(p)
    output_flags(p)
    p.add_argument("--grid", default=None,
                   help="tau grid in microseconds (default 50:400:36)")
    p.add_argument("--time-points", type=int, default=None,
                   help="emit an in-stroke time series at the given tau "
                        "instead of a tau sweep")

    p = sub.add_parser("disorder", help="quenched-average efficiency")
    engine_flags(p)
    disorder_flags(p)
    p.add_argument("--out", default=None, help="write the result as JSON")

    p = sub.add_parser("verify", help="dual-route oracle grid")
    engine_flags(p)
    return parser


def _load_config(args) -> dict:
    if args.config is None:
        return {}
    cfg = configparser.ConfigParser()
    read = cfg.read(args.config)
    if not read:
        raise OSError(f"cannot read config file {args.config!r}")
    if args.section is not None:
        if not cfg.has_section(args.section):
            raise ParameterError(
                f"config file has no section {args.section!r}")
        return dict(cfg[args.section])
    sections = cfg.sections()
    if len(sections) == 1:
        return dict(cfg[sections[0]])
    if sections:
        raise ParameterError(
            f"config file has several sections {sections}; use --section")
    return dict(cfg.defaults())


def _get(args, cfg: dict, key: str, default, cast=float):
    """Flag value if given, else config value, else built-in default."""
    val = getattr(args, key, None)
    if val is not None:
        return val
    if key in cfg:
        return cast(cfg[key])
    return default


def _engine_params(args, cfg) -> EngineParams:
    return EngineParams.from_lab(
        nu_cold_khz=_get(args, cfg, "nu_cold", 2.0),
        nu_hot_khz=_get(args, cfg, "nu_hot", 3.6),
        tau_us=_get(args, cfg, "tau", 100.0),
        g=_get(args, cfg, "g", 0.2),
        p_plus_cold=_get(args, cfg, "p_cold", 0.261),
        p_plus_hot=_get(args, cfg, "p_hot", 0.99))


def _seed(args, cfg) -> int:
    env = os.environ.get(SEED_ENV_VAR)
    fallback = int(env) if env is not None else 12345
    return _get(args, cfg, "seed", fallback, cast=int)


def _disorder_spec(args, cfg) -> DisorderSpec:
    method = _get(args, cfg, "method", "mc", cast=str)
    return DisorderSpec(
        kind=_get(args, cfg, "dist", "gaussian", cast=str),
        sigma=_get(args, cfg, "sigma", 0.05),
        n_samples=_get(args, cfg, "samples", 10_000, cast=int),
        seed=_seed(args, cfg),
        method={"mc": "monte_carlo", "quad": "quadrature"}.get(method, method),
        quadrature_order=_get(args, cfg, "quadrature_order", 16, cast=int))


def _parse_grid(text: str) -> tuple[float, ...]:
    if ":" in text:
        pieces = text.split(":")
        if len(pieces) != 3:
            raise ParameterError(f"bad grid {text!r}; use start:stop:count")
        start, stop, count = float(pieces[0]), float(pieces[1]), int(pieces[2])
        return tuple(np.linspace(start, stop, count))
    return tuple(float(v) for v in text.split(","))


def _emit(records, args, cfg) -> None:
    fmt = _get(args, cfg, "format", "csv", cast=str)
    out = args.out if args.out is not None else sys.stdout
    (emit_csv if fmt == "csv" else emit_json)(records, out)


def _cmd_cycle(args, cfg) -> int:
    params = _engine_params(args, cfg)
    steps = _get(args, cfg, "steps", DEFAULT_STEPS, cast=int)
    res = run_cycle(params, steps, args.strict)
    ok, margin = _try_threshold(params)
    ledger = {
        "xi": res.xi,
        "work_h_khz": res.work / KHZ,
        "q_hot_h_khz": res.q_hot / KHZ,
        "q_cold_h_khz": res.q_cold / KHZ,
        "eta": res.eta,
        "eta_otto": res.eta_otto,
        "mode": res.mode,
        "e_cold_h_khz": res.e_cold / KHZ,
        "e_hot_h_khz": res.e_hot / KHZ,
        "beta_cold": res.beta_cold.beta,
        "beta_hot": res.beta_hot.beta,
        "otto_threshold_met": ok,
        "otto_threshold_margin": margin,
        "n_steps": steps,
        "version": __version__,
    }
    for key, val in ledger.items():
        print(f"{key:>22} = {val}")
    if args.out is not None:
        with open(args.out, "w") as fh:
            json.dump(ledger, fh, indent=1)
            fh.write("\n")
    return 0


def _try_threshold(params):
    try:
        return otto_threshold(params)
    except ParameterError:
        # Sign preconditions not met; the ledger still prints.
        return None, float("nan")


def _cmd_sweep(args, cfg) -> int:
    axis = _get(args, cfg, "axis", "tau", cast=str).replace("-", "_")
    axis = {"p_hot": "p_plus_hot"}.get(axis, axis)
    grid = _parse_grid(_get(args, cfg, "grid", "50:400:36", cast=str))
    outputs = tuple(_get(args, cfg, "outputs", "xi,eta", cast=str).split(","))
    disorder = None
    if "quenched_eta" in outputs or axis == "sigma":
        disorder = _disorder_spec(args, cfg)
    spec = SweepSpec(
        base=_engine_params(args, cfg), axis=axis, grid=grid,
        outputs=outputs, disorder=disorder,
        resolution=_get(args, cfg, "steps", DEFAULT_STEPS, cast=int),
        workers=_get(args, cfg, "workers", 1, cast=int))
    _emit(run_sweep(spec), args, cfg)
    return 0


def _cmd_coherence(args, cfg) -> int:
    params = _engine_params(args, cfg)
    steps = _get(args, cfg, "steps", DEFAULT_STEPS, cast=int)
    points = _get(args, cfg, "time_points", 0, cast=int)
    if points:
        report = stroke_coherence(params, steps, time_points=points)
        out = args.out if args.out is not None else sys.stdout
        close = not hasattr(out, "write")
        fh = open(out, "w") if close else out
        try:
            fh.write("t_us,c_exp,c_comp\n")
            for t, ce, cc in zip(report.series_times, report.c_exp_series,
                                 report.c_comp_series):
                fh.write(f"{t * 1e6:.17g},{ce:.17g},{cc:.17g}\n")
        finally:
            if close:
                fh.close()
        return 0
    grid = _parse_grid(_get(args, cfg, "grid", "50:400:36", cast=str))
    spec = SweepSpec(base=params, axis="tau", grid=grid,
                     outputs=("coherence",), resolution=steps)
    _emit(run_sweep(spec), args, cfg)
    return 0


def _cmd_disorder(args, cfg) -> int:
    params = _engine_params(args, cfg)
    spec = _disorder_spec(args, cfg)
    steps = _get(args, cfg, "steps", DEFAULT_SAMPLE_STEPS, cast=int)
    workers = _get(args, cfg, "workers", 1, cast=int)
    res = quenched_efficiency(params, spec, steps, workers)
    payload = {
        "mean_eta": res.mean_eta, "std_error": res.std_error,
        "n_effective": res.n_effective, "rejected": res.rejected,
        "sigma": spec.sigma, "kind": spec.kind, "method": spec.method,
        "seed": spec.seed, "n_steps": steps, "version": __version__,
    }
    for key, val in payload.items():
        print(f"{key:>12} = {val}")
    if args.out is not None:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
    return 0


def _cmd_verify(args, cfg) -> int:
    params = _engine_params(args, cfg)
    steps = _get(args, cfg, "steps", DEFAULT_STEPS, cast=int)
    deviations = verify_dual_route(params, n_steps=steps)
    failed = False
    for name, value in deviations.items():
        limit = VERIFY_LIMITS[name]
        status = "ok" if value < limit else "FAIL"
        if value >= limit:
            failed = True
        print(f"{name:>16}: max deviation {value:.3e} (limit {limit:.0e}) "
              f"{status}")
    if failed:
        raise NumericsError("dual-route verification failed")
    return 0


_COMMANDS = {
    "cycle": _cmd_cycle,
    "sweep": _cmd_sweep,
    "coherence": _cmd_coherence,
    "disorder": _cmd_disorder,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        return _COMMANDS[args.command](args, cfg)
    except (ParameterError, DegeneracyError) as exc:
        print(f"qotto: error: {exc}", file=sys.stderr)
        return 1
    except NumericsError as exc:
        print(f"qotto: numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qotto: i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
