"""Command-line front end.

Subcommands: ``metric`` (one scalar), ``sweep`` (grid to CSV), ``figure``
(canned figure sweeps to CSV), ``validate`` (cross-engine harness).

Exit codes: 0 success, 1 validation failure, 2 invalid input, 3 numeric
failure.  ``GSP_THREADS`` caps worker parallelism (0 = auto).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import DomainError, GspMziError, NumericFailureError
from .figures import FIGURE_NAMES, run_figure
from .loss import Placement
from .sweeps import (
    ENGINE_LABELS,
    METRICS,
    Job,
    StateSpec,
    SweepConfig,
    _linspace,
    evaluate_metric,
    load_config_file,
    run_sweep,
)
from .validate import GRID_NAMES, run_validation

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INVALID = 2
EXIT_NUMERIC = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gsp-mzi",
        description=(
            "Nonclassicality and parity-detection phase metrology of GSP-operated "
            "two-mode squeezed vacuum.  Limit curves (sql, hl) are referenced to the "
            "total photon number of both modes, i.e. twice the per-mode apn metric."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_state_flags(p):
        p.add_argument("--family", default="gsp", help="gsp | tmsv | ps-tmsv | pa-tmsv")
        p.add_argument("--s", type=float, default=None, help="superposition weight (gsp only)")
        p.add_argument("--m", type=int, default=None, help="operation order on mode a (gsp only)")
        p.add_argument("--n", type=int, default=None, help="operation order on mode b (gsp only)")

    mp = sub.add_parser("metric", help="print one metric with 12 significant digits")
    mp.add_argument("metric", choices=METRICS)
    add_state_flags(mp)
    mp.add_argument("--z", type=float, required=True, help="squeezing parameter in (0, 1)")
    mp.add_argument("--phi", type=float, default=None, help="detection phase (radians)")
    mp.add_argument("--eta1", type=float, default=None, help="external-loss transmissivity")
    mp.add_argument("--eta2", type=float, default=None, help="internal-loss transmissivity")
    mp.add_argument("--engine", choices=("closed", "oracle"), default=None)
    mp.set_defaults(func=cmd_metric)

    sp = sub.add_parser("sweep", help="evaluate a parameter grid and write a CSV")
    sp.add_argument("--config", type=Path, default=None, help="JSON sweep description")
    add_state_flags(sp)
    sp.add_argument("--z", type=float, default=None, help="single z value")
    sp.add_argument("--z-from", type=float, default=None)
    sp.add_argument("--z-to", type=float, default=None)
    sp.add_argument("--z-steps", type=int, default=None)
    sp.add_argument("--phi", type=float, default=None, help="single detection phase")
    sp.add_argument("--phi-from", type=float, default=None)
    sp.add_argument("--phi-to", type=float, default=None)
    sp.add_argument("--phi-steps", type=int, default=None)
    sp.add_argument("--placement", choices=("external", "internal", "both"), default=None)
    sp.add_argument("--eta", type=float, action="append", default=None, help="repeatable")
    sp.add_argument("--metrics", default=None, help="comma-separated metric names")
    sp.add_argument("--engine", choices=("closed", "oracle", "both"), default="closed")
    sp.add_argument("--output", type=Path, default=None, help="CSV output path")
    sp.set_defaults(func=cmd_sweep)

    fp = sub.add_parser("figure", help="write the canned figure sweeps (one CSV per panel)")
    fp.add_argument("name", choices=FIGURE_NAMES)
    fp.add_argument("--outdir", type=Path, default=Path("figures"))
    fp.set_defaults(func=cmd_figure)

    vp = sub.add_parser("validate", help="run the cross-engine validation harness")
    vp.add_argument("--grid", choices=GRID_NAMES, default="full")
    vp.add_argument("--rel-floor", type=float, default=1e-3,
                    help="absolute scale floor of the relative-deviation measure")
    vp.set_defaults(func=cmd_validate)

    return parser


def _state_spec(args) -> StateSpec:
    return StateSpec(family=args.family, s=args.s, m=args.m, n=args.n)


def cmd_metric(args) -> int:
    spec = _state_spec(args)
    engine = args.engine or ("oracle" if spec.family in ("ps-tmsv", "pa-tmsv") else "closed")
    placement = None
    eta = None
    if args.metric in ("parity_loss", "sensitivity_loss"):
        if (args.eta1 is None) == (args.eta2 is None):
            raise DomainError("loss metrics need exactly one of --eta1 / --eta2")
        placement = Placement.EXTERNAL if args.eta1 is not None else Placement.INTERNAL
        eta = args.eta1 if args.eta1 is not None else args.eta2
    if args.metric in ("parity", "sensitivity", "parity_loss", "sensitivity_loss"):
        if args.phi is None:
            raise DomainError(f"metric {args.metric} needs --phi")
    value = evaluate_metric(Job(spec, args.z, args.metric, engine, args.phi, placement, eta))
    print(f"{value:#.12g} {ENGINE_LABELS[engine]}")
    return EXIT_OK


def _axis_from_flags(single, lo, hi, steps, what):
    if single is not None:
        return (float(single),)
    if lo is None and hi is None and steps is None:
        return ()
    if None in (lo, hi, steps):
        raise DomainError(f"{what} range needs --{what}-from, --{what}-to and --{what}-steps")
    return _linspace(lo, hi, steps)


def cmd_sweep(args) -> int:
    if args.config is not None:
        cfg = load_config_file(args.config, str(args.output) if args.output else None)
    else:
        if args.output is None:
            raise DomainError("sweep needs --output (or a config file with one)")
        if args.metrics is None:
            raise DomainError("sweep needs --metrics (or a config file)")
        if args.placement == "both":
            placements = (Placement.EXTERNAL, Placement.INTERNAL)
        elif args.placement:
            placements = (Placement(args.placement),)
        else:
            placements = ()
        engines = ("closed", "oracle") if args.engine == "both" else (args.engine,)
        cfg = SweepConfig(
            states=(_state_spec(args),),
            z_values=_axis_from_flags(args.z, args.z_from, args.z_to, args.z_steps, "z"),
            metrics=tuple(m.strip() for m in args.metrics.split(",") if m.strip()),
            engines=engines,
            output=str(args.output),
            phi_values=_axis_from_flags(args.phi, args.phi_from, args.phi_to, args.phi_steps, "phi"),
            placements=placements,
            etas=tuple(args.eta or ()),
        )
    rows = run_sweep(cfg)
    print(f"wrote {len(rows)} rows to {cfg.output}")
    return EXIT_OK


def cmd_figure(args) -> int:
    for path in run_figure(args.name, args.outdir):
        print(f"wrote {path}")
    return EXIT_OK


def cmd_validate(args) -> int:
    report = run_validation(args.grid, rel_floor=args.rel_floor, progress=print)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return EXIT_INVALID if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except NumericFailureError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, GspMziError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
