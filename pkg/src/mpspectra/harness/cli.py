"""Command-line entry point.

    mpspectra sweep --config sweep.json --out sweep.csv --figure sweep.png
    mpspectra mp-eval --c 2 --points 201 --format json

Exit codes: 0 success, 2 invalid configuration or arguments, 3 numerical
failure, 1 any other error (e.g. unwritable output path).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from ..ensembles import parse_aspect
from ..errors import CapacityError, ConfigError, DomainError, NumericalError, SpecError
from ..mp_law import mp_support
from .config import Experiment, parse_config
from .emit import emit, format_value, render_csv, render_json
from .runner import mp_eval, run_experiment

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

SUBCOMMANDS = {
    "sweep": Experiment.SWEEP,
    "diagnose": Experiment.DIAGNOSE,
    "varcheck": Experiment.VARCHECK,
    "residual": Experiment.RESIDUAL,
    "normcheck": Experiment.NORMCHECK,
}


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default: csv)")
    p.add_argument("--figure", help="also render a figure to this path (.png, .pdf, .svg)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mpspectra", description="Marchenko-Pastur spectral experiments")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, exp in SUBCOMMANDS.items():
        p = sub.add_parser(name, help=f"run a {exp.value} experiment")
        p.add_argument("--config", required=True, help="JSON experiment configuration")
        p.add_argument("--cache-dir", help="eigenvalue cache directory (sweep only)")
        _add_output_args(p)
    p = sub.add_parser("mp-eval", help="tabulate the Marchenko-Pastur density and distribution function")
    p.add_argument("--c", required=True, help="aspect parameter, e.g. 2 or 1/2")
    p.add_argument("--x-min", type=float, default=None)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--points", type=int, default=201)
    _add_output_args(p)
    return parser


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _run_mp_eval(args) -> int:
    try:
        c = float(parse_aspect(args.c))
    except SpecError:
        try:
            c = float(args.c)
        except ValueError:
            raise ConfigError(f"cannot parse {args.c!r}", key="c") from None
    _, b = mp_support(c)
    x_min = -0.25 if args.x_min is None else args.x_min
    x_max = b + 0.5 if args.x_max is None else args.x_max
    if args.points < 2 or not x_max > x_min:
        raise ConfigError("need points >= 2 and x_max > x_min", key="points")
    table = mp_eval(c, x_min, x_max, args.points)
    if (args.format or "csv") == "json":
        text = json.dumps({"c": c, **{k: v.tolist() for k, v in table.items()}}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "density", "cdf"])
        for row in zip(table["x"], table["density"], table["cdf"]):
            w.writerow([format_value(float(v)) for v in row])
        text = buf.getvalue()
    _write(text, args.out)
    if args.figure:
        from .plots import render_law

        render_law(table, c, args.figure)
    return EXIT_OK


def _run_experiment(args) -> int:
    path = Path(args.config)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}", key="config") from None
    cfg = parse_config(text)
    expected = SUBCOMMANDS[args.command]
    if cfg.experiment is not expected:
        raise ConfigError(f"config declares {cfg.experiment.value} but subcommand is {args.command}", key="experiment")
    overrides = {k: getattr(args, k) for k in ("out", "format", "figure") if getattr(args, k) is not None}
    if args.cache_dir is not None:
        overrides["cache_dir"] = args.cache_dir
    cfg = replace(cfg, **overrides)
    result = run_experiment(cfg)
    if cfg.out is None:
        _write(render_json(result) if cfg.format == "json" else render_csv(result), None)
    else:
        emit(result, cfg.out, cfg.format)
    if cfg.figure:
        from .plots import render

        render(result, cfg.figure)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "mp-eval":
            return _run_mp_eval(args)
        return _run_experiment(args)
    except (ConfigError, SpecError, DomainError) as exc:
        print(f"mpspectra: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, CapacityError) as exc:
        print(f"mpspectra: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"mpspectra: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
