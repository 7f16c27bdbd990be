"""Parameter sweeps, figure presets and CSV output."""

from __future__ import annotations

import io
import json
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product

import numpy as np

from . import steady_state
from .config import (
    PARAMETERS,
    load_json,
    params_from_dict,
    params_to_dict,
    parse_bipartitions,
    set_parameter,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    NumericalError,
    ParameterWarning,
    StabilityError,
    ValidationError,
)
from .model import baseline_params, validate
from .pipeline import EntanglementReport, pair_label, run_point

THREADS_ENV = "EXCITONOPT_THREADS"
FORMATS = ("csv", "csv+svg")


@dataclass(frozen=True)
class Axis:
    """One swept parameter; bounds in config units (Hz, K, W)."""

    param: str
    min: float
    max: float
    points: int

    def __post_init__(self):
        if self.param not in PARAMETERS:
            raise ConfigError(f"unknown sweep parameter {self.param!r}")
        if not (isinstance(self.points, int) and self.points >= 2):
            raise ConfigError(f"axis {self.param}: points must be an integer >= 2")
        if not self.min < self.max:
            raise ConfigError(f"axis {self.param}: min must be smaller than max")

    def values(self):
        return np.linspace(self.min, self.max, self.points)


@dataclass(frozen=True)
class SweepConfig:
    base: object
    axes: tuple
    bipartitions: tuple = (("x1", "x2"),)
    output: str = None
    format: str = "csv"
    name: str = None
    notes: tuple = ()

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ConfigError("a sweep needs one or two axes")
        if len({a.param for a in self.axes}) != len(self.axes):
            raise ConfigError("sweep axes must be distinct parameters")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}")

    def with_grid(self, *points):
        """Copy with a different number of points per axis."""
        if len(points) != len(self.axes):
            raise ConfigError(
                f"grid needs {len(self.axes)} dimension(s), got {len(points)}")
        axes = tuple(replace(a, points=n) for a, n in zip(self.axes, points))
        return replace(self, axes=axes)


@dataclass
class GridResult:
    """Row-major grid of reports; the first axis is the outer loop."""

    axes: tuple
    bipartitions: tuple
    coords: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    notes: tuple = ()

    @property
    def shape(self):
        return tuple(a.points for a in self.axes)

    def column(self, name):
        """Values of one CSV column as a float array."""
        if name in [a.param for a in self.axes]:
            k = [a.param for a in self.axes].index(name)
            return np.array([c[k] for c in self.coords], dtype=float)
        return np.array([_report_columns(r, self.bipartitions)[name] for r in self.reports],
                        dtype=float)

    def header(self):
        cols = [a.param for a in self.axes]
        cols += ["E_N_" + pair_label(p) for p in self.bipartitions]
        cols += ["nu_min", "n_eff", "max_re", "status"]
        return cols

    def to_csv(self):
        out = io.StringIO(newline="")
        out.write(",".join(self.header()) + "\n")
        for coord, report in zip(self.coords, self.reports):
            cells = [fmt(x) for x in coord]
            cols = _report_columns(report, self.bipartitions)
            cells += [fmt(cols["E_N_" + pair_label(p)]) for p in self.bipartitions]
            cells += [fmt(cols["nu_min"]), fmt(cols["n_eff"]), fmt(cols["max_re"]),
                      report.status]
            out.write(",".join(cells) + "\n")
        return out.getvalue()

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())


def fmt(x):
    """Fixed 9-significant-digit formatting used for every CSV number."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if x == 0:
        return "0"
    return format(x, ".9g")


def _report_columns(report, bipartitions):
    cols = {"E_N_" + pair_label(p): report.entanglement.get(tuple(p), math.nan)
            for p in bipartitions}
    cols.update(nu_min=report.nu_min, n_eff=report.n_eff, max_re=report.max_re)
    return cols


def _failed(status, bipartitions, stable=False, max_re=math.nan):
    nan = math.nan
    return EntanglementReport(
        entanglement={tuple(p): nan for p in bipartitions},
        nu_min=nan, n_eff=nan, stable=stable, max_re=max_re, status=status)


def evaluate_point(base, params_and_values, bipartitions):
    """Evaluate one grid point; failures become a status instead of an exception."""
    params = base
    for name, value in params_and_values:
        params = set_parameter(params, name, float(value))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParameterWarning)
            report = run_point(params, bipartitions)
    except ValidationError:
        return _failed("invalid", bipartitions)
    except ConvergenceError:
        return _failed("nonconvergent", bipartitions)
    except (NumericalError, StabilityError, ValueError):
        return _failed("numerical_error", bipartitions)
    return replace(report, covariance=None, warnings=())


def _evaluate_task(task):
    return evaluate_point(*task)


def worker_count(threads=None):
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    if threads is None:
        threads = os.cpu_count() or 1
    return max(1, int(threads))


def run_sweep(sweep, threads=None):
    """Evaluate every point of the Cartesian grid of ``sweep``.

    Rows come out in row-major order regardless of the worker count.
    """
    names = [a.param for a in sweep.axes]
    coords = list(product(*(a.values() for a in sweep.axes)))
    tasks = [(sweep.base, tuple(zip(names, c)), sweep.bipartitions) for c in coords]
    workers = min(worker_count(threads), len(tasks))
    if workers == 1:
        reports = [_evaluate_task(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_evaluate_task, tasks, chunksize=chunk))
    return GridResult(
        axes=sweep.axes,
        bipartitions=sweep.bipartitions,
        coords=[tuple(float(x) for x in c) for c in coords],
        reports=reports,
        notes=sweep.notes,
    )


def metadata(sweep):
    return {
        "scenario": sweep.name,
        "base": params_to_dict(sweep.base),
        "axes": [
            {"param": a.param, "min": a.min, "max": a.max, "points": a.points}
            for a in sweep.axes
        ],
        "bipartitions": [list(p) for p in sweep.bipartitions],
        "units": "frequencies in Hz (omega/2pi), temperature in K, power in W, "
                 "max_re in 1/s",
        "notes": list(sweep.notes),
    }


def load_sweep_config(path):
    raw, text = load_json(path)
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    unknown = sorted(set(raw) - {"base", "axes", "bipartitions", "output", "format"})
    if unknown:
        raise ConfigError(f"{path}: unknown key(s): {', '.join(unknown)}")
    if "base" not in raw or "axes" not in raw:
        raise ConfigError(f"{path}: sweep config needs 'base' and 'axes'")
    base = params_from_dict(raw["base"], text)
    if not isinstance(raw["axes"], list):
        raise ConfigError(f"{path}: 'axes' must be a list")
    axes = []
    for item in raw["axes"]:
        try:
            axes.append(Axis(item["param"], float(item["min"]), float(item["max"]),
                             item["points"]))
        except (KeyError, TypeError) as exc:
            raise ConfigError(
                f"{path}: each axis needs param, min, max, points ({exc})") from exc
    return SweepConfig(
        base=base,
        axes=tuple(axes),
        bipartitions=parse_bipartitions(raw.get("bipartitions"), text),
        output=raw.get("output"),
        format=raw.get("format", "csv"),
    )


_FIG3A_NOTE = ("effective couplings swept by magnitude; phases fixed to the "
               "mean-field phases of G_1, G_2 at the base point")
_FIG2A_NOTE = ("|G_1|, |G_2| held at their values at the optimal detunings; phases "
               "follow the mean field at each grid point")

SCENARIOS = {
    "fig2a": dict(
        axes=(Axis("eff_delta_1", -40e9, 40e9, 101), Axis("eff_delta_2", -40e9, 40e9, 101)),
        fixed_couplings=True,
        notes=(_FIG2A_NOTE,),
        description="E_N(x1,x2) versus the two effective exciton detunings",
    ),
    "fig2b": dict(
        axes=(Axis("G0_2", 0.0, 40e6, 81),),
        bipartitions=(("x1", "x2"), ("x1", "b")),
        description="E_N(x1,x2) and E_N(x1,b) versus the bare coupling G0_2",
    ),
    "fig3a": dict(
        axes=(Axis("G_1_mag", 0.0, 500e6, 101), Axis("G_2_mag", 0.0, 500e6, 101)),
        notes=(_FIG3A_NOTE,),
        description="E_N(x1,x2) versus effective coupling magnitudes |G_1|, |G_2|",
    ),
    "fig3b": dict(
        axes=(Axis("g_1", 0.1e9, 3e9, 101), Axis("g_2", 0.1e9, 3e9, 101)),
        description="E_N(x1,x2) versus exciton-photon couplings g_1, g_2",
    ),
    "fig4a": dict(
        axes=(Axis("kappa_12", 50e6, 1e9, 101), Axis("kappa_c", 1e9, 50e9, 101)),
        description="E_N(x1,x2) versus exciton (kappa_1 = kappa_2) and cavity decay rates",
    ),
    "fig4b": dict(
        axes=(Axis("temperature", 0.0, 300.0, 101), Axis("kappa_b", 0.1e6, 10e6, 101)),
        description="E_N(x1,x2) versus bath temperature and mechanical damping",
    ),
}


def baseline_couplings(params):
    """Mean-field effective couplings (rad/s) of ``params``."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParameterWarning)
        system = validate(params)
    state = steady_state.solve(system)
    return state.G_1, state.G_2


def scenario(name):
    """Preset sweep reproducing one of the reference figures."""
    try:
        spec = SCENARIOS[name]
    except KeyError:
        raise ConfigError(
            f"unknown scenario {name!r}; valid scenarios: {', '.join(SCENARIOS)}") from None
    base = baseline_params()
    if spec.get("fixed_couplings"):
        G_1, G_2 = baseline_couplings(base)
        base = replace(base, G_1_mag=abs(G_1), G_2_mag=abs(G_2))
    return SweepConfig(
        base=base,
        axes=spec["axes"],
        bipartitions=spec.get("bipartitions", (("x1", "x2"),)),
        name=name,
        notes=spec.get("notes", ()),
    )


def write_outputs(result, sweep, path, svg=False):
    """Write the CSV, a ``.meta.json`` sidecar and optionally an SVG heatmap."""
    from .heatmap import render_heatmap

    result.write_csv(path)
    stem = path[:-4] if path.endswith(".csv") else path
    with open(stem + ".meta.json", "w", encoding="utf-8", newline="") as fh:
        json.dump(metadata(sweep), fh, indent=2, sort_keys=True)
        fh.write("\n")
    written = [path, stem + ".meta.json"]
    if svg:
        column = "E_N_" + pair_label(sweep.bipartitions[0])
        with open(stem + ".svg", "w", encoding="utf-8", newline="") as fh:
            fh.write(render_heatmap(result, column))
        written.append(stem + ".svg")
    return written
