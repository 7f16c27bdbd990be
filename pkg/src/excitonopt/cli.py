"""Command-line interface.

Exit codes: 0 success, 1 configuration error, 2 numerical failure
(``point`` only; sweeps record failures per row).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

from .config import load_point_config
from .errors import (
    ConfigError,
    ConvergenceError,
    NumericalError,
    ParameterWarning,
    StabilityError,
    ValidationError,
)
from .model import TWO_PI
from .pipeline import pair_label, run_point
from .sweep import SCENARIOS, load_sweep_config, run_sweep, scenario, write_outputs

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


def _jsonable(x):
    return None if isinstance(x, float) and math.isnan(x) else x


def _point(args):
    cfg = load_point_config(args.config)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ParameterWarning)
        report = run_point(cfg.params, cfg.bipartitions)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    out = {
        "stable": report.stable,
        "status": report.status,
        "E_N": {pair_label(p): _jsonable(v) for p, v in report.entanglement.items()},
        "nu_min": _jsonable(report.nu_min),
        "n_eff": _jsonable(report.n_eff),
        "max_re": report.max_re,
        "G_1_over_2pi_Hz": [report.G_1.real / TWO_PI, report.G_1.imag / TWO_PI],
        "G_2_over_2pi_Hz": [report.G_2.real / TWO_PI, report.G_2.imag / TWO_PI],
    }
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def _parse_grid(text, n_axes):
    try:
        points = tuple(int(p) for p in text.lower().split("x"))
    except ValueError:
        raise ConfigError(f"--grid expects N or NxM, got {text!r}") from None
    if len(points) != n_axes:
        raise ConfigError(f"--grid {text!r} does not match a {n_axes}D sweep")
    return points


def _sweep(args):
    if (args.scenario is None) == (args.config is None):
        raise ConfigError("sweep needs exactly one of --scenario or --config")
    if args.scenario is not None:
        sweep = scenario(args.scenario)
        out = args.out or f"{args.scenario}.csv"
        svg = args.svg
    else:
        sweep = load_sweep_config(args.config)
        out = args.out or sweep.output or "sweep.csv"
        svg = args.svg or sweep.format == "csv+svg"
    if args.grid:
        sweep = sweep.with_grid(*_parse_grid(args.grid, len(sweep.axes)))
    if svg and len(sweep.axes) != 2:
        raise ConfigError("--svg needs a 2D sweep; plot 1D results as lines from the CSV columns")
    result = run_sweep(sweep, threads=args.threads)
    for path in write_outputs(result, sweep, out, svg=svg):
        print(path)
    return EXIT_OK


def _scenarios(args):
    for name, spec in SCENARIOS.items():
        print(f"{name}\t{spec['description']}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="excitonopt",
        description="Steady-state exciton entanglement in a driven exciton-optomechanical cavity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="evaluate a single parameter point")
    p.add_argument("--config", required=True, help="JSON parameter file")
    p.set_defaults(func=_point)

    s = sub.add_parser("sweep", help="run a 1D or 2D parameter sweep")
    s.add_argument("--scenario", help="figure preset (see `scenarios`)")
    s.add_argument("--config", help="JSON sweep file")
    s.add_argument("--grid", help="points per axis, e.g. 51x51 or 41")
    s.add_argument("--out", help="CSV output path")
    s.add_argument("--svg", action="store_true", help="also write an SVG heatmap")
    s.add_argument("--threads", type=int, help="worker processes (default: all cores)")
    s.set_defaults(func=_sweep)

    sc = sub.add_parser("scenarios", help="list figure presets")
    sc.set_defaults(func=_scenarios)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, NumericalError, StabilityError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
