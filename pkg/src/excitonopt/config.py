"""JSON configuration files.

Frequencies and rates are written as ordinary frequencies ``omega / 2pi``
in Hz, temperatures in K, drive power in W and the exciton binding energy
in J. A parameter block looks like::

    {
      "omega_b": 20e9, "kappa_b": 1e6, "kappa_c": 10e9,
      "kappa_1": 100e6, "kappa_2": 100e6, "g_1": 1e9, "g_2": 1e9,
      "G0_1": 10e6, "G0_2": 20e6, "delta_c": 20e9,
      "eff_delta_1": -20e9, "eff_delta_2": 20e9,
      "omega_drive": 5.5e12, "omega_0": 300e12, "temperature": 1.0
    }

Bare detunings are given as ``delta_1``/``delta_2`` instead of
``eff_delta_1``/``eff_delta_2``, and the drive as ``power`` instead of
``omega_drive``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, replace

from .errors import ConfigError
from .model import (
    TWO_PI,
    BareDetunings,
    DriveAmplitude,
    DrivePower,
    EffectiveDetunings,
    SystemParams,
)

# name -> (SI factor, display unit, display divisor in config units)
PARAMETERS = {
    "omega_b": (TWO_PI, "GHz", 1e9),
    "kappa_b": (TWO_PI, "MHz", 1e6),
    "kappa_c": (TWO_PI, "GHz", 1e9),
    "kappa_1": (TWO_PI, "MHz", 1e6),
    "kappa_2": (TWO_PI, "MHz", 1e6),
    "kappa_12": (TWO_PI, "MHz", 1e6),
    "g_1": (TWO_PI, "GHz", 1e9),
    "g_2": (TWO_PI, "GHz", 1e9),
    "G0_1": (TWO_PI, "MHz", 1e6),
    "G0_2": (TWO_PI, "MHz", 1e6),
    "delta_c": (TWO_PI, "GHz", 1e9),
    "delta_1": (TWO_PI, "GHz", 1e9),
    "delta_2": (TWO_PI, "GHz", 1e9),
    "eff_delta_1": (TWO_PI, "GHz", 1e9),
    "eff_delta_2": (TWO_PI, "GHz", 1e9),
    "omega_drive": (TWO_PI, "THz", 1e12),
    "omega_0": (TWO_PI, "THz", 1e12),
    "G_1_mag": (TWO_PI, "MHz", 1e6),
    "G_2_mag": (TWO_PI, "MHz", 1e6),
    "power": (1.0, "mW", 1e-3),
    "temperature": (1.0, "K", 1.0),
    "binding_energy": (1.0, "meV", 1.602176634e-22),
}

_SCALAR_FIELDS = (
    "omega_b", "kappa_b", "kappa_c", "kappa_1", "kappa_2", "g_1", "g_2",
    "G0_1", "G0_2", "delta_c", "omega_0", "temperature",
)
_OPTIONAL_FIELDS = ("binding_energy", "G_1_mag", "G_2_mag")
_KNOWN_KEYS = set(PARAMETERS) - {"kappa_12"} | {"exact_phonon_shift"}

MODE_NAMES = ("x1", "x2", "c", "b")


def display_unit(name):
    _, unit, divisor = PARAMETERS[name]
    return unit, divisor


def to_si(name, value):
    return value * PARAMETERS[name][0]


def from_si(name, value):
    return value / PARAMETERS[name][0]


def _line_of(text, key):
    if text is None:
        return None
    match = re.search(r'"%s"\s*:' % re.escape(key), text)
    if match is None:
        return None
    return text.count("\n", 0, match.start()) + 1


def _fail(message, text=None, key=None):
    line = _line_of(text, key) if key is not None else None
    where = f" (line {line})" if line else ""
    raise ConfigError(f"{message}{where}")


def _number(raw, key, text):
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(f"field '{key}' must be a number, got {value!r}", text, key)
    if not math.isfinite(value):
        _fail(f"field '{key}' must be finite", text, key)
    return float(value)


def params_from_dict(raw, text=None):
    """Build :class:`SystemParams` from a dict in config units (Hz, K, W, J)."""
    if not isinstance(raw, dict):
        raise ConfigError("parameter block must be a JSON object")
    unknown = sorted(set(raw) - _KNOWN_KEYS)
    if unknown:
        _fail(f"unknown field(s): {', '.join(unknown)}", text, unknown[0])
    missing = [k for k in _SCALAR_FIELDS if k not in raw]
    if missing:
        raise ConfigError(f"missing field(s): {', '.join(missing)}")

    values = {k: to_si(k, _number(raw, k, text)) for k in _SCALAR_FIELDS}
    for k in _OPTIONAL_FIELDS:
        if raw.get(k) is not None:
            values[k] = to_si(k, _number(raw, k, text))

    has_eff = "eff_delta_1" in raw or "eff_delta_2" in raw
    has_bare = "delta_1" in raw or "delta_2" in raw
    if has_eff == has_bare:
        raise ConfigError(
            "give exactly one of eff_delta_1/eff_delta_2 or delta_1/delta_2")
    prefix = "eff_delta" if has_eff else "delta"
    for k in (f"{prefix}_1", f"{prefix}_2"):
        if k not in raw:
            raise ConfigError(f"missing field: {k}")
    d1 = to_si(f"{prefix}_1", _number(raw, f"{prefix}_1", text))
    d2 = to_si(f"{prefix}_2", _number(raw, f"{prefix}_2", text))
    detuning = EffectiveDetunings(d1, d2) if has_eff else BareDetunings(d1, d2)

    if ("omega_drive" in raw) == ("power" in raw):
        raise ConfigError("give exactly one of omega_drive or power")
    if "omega_drive" in raw:
        drive = DriveAmplitude(to_si("omega_drive", _number(raw, "omega_drive", text)))
    else:
        drive = DrivePower(_number(raw, "power", text))

    exact = raw.get("exact_phonon_shift", False)
    if not isinstance(exact, bool):
        _fail("field 'exact_phonon_shift' must be true or false", text, "exact_phonon_shift")

    return SystemParams(detuning=detuning, drive=drive, exact_phonon_shift=exact, **values)


def params_to_dict(params):
    """Inverse of :func:`params_from_dict`."""
    out = {k: from_si(k, getattr(params, k)) for k in _SCALAR_FIELDS}
    if isinstance(params.detuning, EffectiveDetunings):
        out["eff_delta_1"] = from_si("eff_delta_1", params.detuning.delta_1)
        out["eff_delta_2"] = from_si("eff_delta_2", params.detuning.delta_2)
    else:
        out["delta_1"] = from_si("delta_1", params.detuning.delta_1)
        out["delta_2"] = from_si("delta_2", params.detuning.delta_2)
    if isinstance(params.drive, DriveAmplitude):
        out["omega_drive"] = from_si("omega_drive", params.drive.omega_drive)
    else:
        out["power"] = params.drive.power
    for k in _OPTIONAL_FIELDS:
        value = getattr(params, k)
        if value is not None:
            out[k] = from_si(k, value)
    out["exact_phonon_shift"] = params.exact_phonon_shift
    return out


def parse_bipartitions(raw, text=None):
    if raw is None:
        return (("x1", "x2"),)
    if not isinstance(raw, list) or not raw:
        _fail("'bipartitions' must be a non-empty list of mode pairs", text, "bipartitions")
    pairs = []
    for item in raw:
        if (not isinstance(item, (list, tuple)) or len(item) != 2
                or any(m not in MODE_NAMES for m in item) or item[0] == item[1]):
            _fail(f"invalid bipartition {item!r}; modes are {', '.join(MODE_NAMES)}",
                  text, "bipartitions")
        pairs.append((item[0], item[1]))
    return tuple(pairs)


def set_parameter(params, name, value):
    """Return ``params`` with one parameter replaced; ``value`` in config units."""
    if name not in PARAMETERS:
        raise ConfigError(f"unknown sweep parameter {name!r}")
    si = to_si(name, value)
    if name == "kappa_12":
        return replace(params, kappa_1=si, kappa_2=si)
    if name in ("eff_delta_1", "eff_delta_2", "delta_1", "delta_2"):
        wanted = EffectiveDetunings if name.startswith("eff_") else BareDetunings
        if not isinstance(params.detuning, wanted):
            raise ConfigError(
                f"cannot sweep {name} when the base detunings are of the other kind")
        which = "delta_" + name[-1]
        return replace(params, detuning=replace(params.detuning, **{which: si}))
    if name == "omega_drive":
        return replace(params, drive=DriveAmplitude(si))
    if name == "power":
        return replace(params, drive=DrivePower(si))
    return replace(params, **{name: si})


@dataclass(frozen=True)
class PointConfig:
    params: SystemParams
    bipartitions: tuple


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def load_point_config(path):
    """Parameter block with an optional ``bipartitions`` list."""
    raw, text = load_json(path)
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    raw = dict(raw)
    pairs = parse_bipartitions(raw.pop("bipartitions", None), text)
    return PointConfig(params_from_dict(raw, text), pairs)
