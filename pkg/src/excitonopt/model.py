"""Physical parameters, unit conventions and input validation.

All quantities in :class:`SystemParams` are SI angular quantities (rad/s),
except the temperature (K), drive power (W) and binding energy (J).
Configuration files use ordinary frequencies ``nu = omega / 2pi`` in Hz;
the conversion happens once, in :mod:`excitonopt.config`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .errors import IonizationWarning, SidebandWarning, ValidationError

# CODATA 2018 (exact in the 2019 SI)
HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K
ELEMENTARY_CHARGE = 1.602176634e-19  # C

TWO_PI = 2.0 * math.pi

# Largest argument for which exp() is finite in double precision.
_EXP_MAX = 709.0


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = HBAR
    k_B: float = K_B


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class EffectiveDetunings:
    """Exciton-drive detunings including the deformation-potential shift."""

    delta_1: float
    delta_2: float


@dataclass(frozen=True)
class BareDetunings:
    """Bare exciton-drive detunings ``omega_k - omega_0``."""

    delta_1: float
    delta_2: float


@dataclass(frozen=True)
class DriveAmplitude:
    """Drive coupling rate Omega given directly (rad/s)."""

    omega_drive: float


@dataclass(frozen=True)
class DrivePower:
    """Drive specified by laser power (W); converted using ``omega_0``."""

    power: float


Detuning = Union[EffectiveDetunings, BareDetunings]
Drive = Union[DriveAmplitude, DrivePower]


@dataclass(frozen=True)
class SystemParams:
    """Every physical input of the four-mode model.

    ``G_1_mag``/``G_2_mag`` optionally override the magnitudes of the
    effective exciton-phonon couplings while keeping the phases obtained
    from the mean-field steady state. ``exact_phonon_shift`` selects the
    damped expression for the mean phonon amplitude instead of the
    ``-sum G0 |x|^2 / omega_b`` approximation.
    """

    omega_b: float
    kappa_b: float
    kappa_c: float
    kappa_1: float
    kappa_2: float
    g_1: float
    g_2: float
    G0_1: float
    G0_2: float
    delta_c: float
    detuning: Detuning
    drive: Drive
    omega_0: float
    temperature: float
    binding_energy: float = 10e-3 * ELEMENTARY_CHARGE
    exact_phonon_shift: bool = False
    G_1_mag: Optional[float] = None
    G_2_mag: Optional[float] = None


@dataclass(frozen=True)
class BathOccupations:
    N_x1: float
    N_x2: float
    N_c: float
    N_b: float


@dataclass(frozen=True)
class ValidatedSystem:
    """Flat, checked parameter record consumed by the numerical modules.

    Rates and frequencies are expressed in units of ``rate_unit`` rad/s:
    ``rate_unit == 1`` for SI values, ``rate_unit == omega_b`` after
    :func:`normalize`. Bath occupations are unit-free and fixed at
    validation time from the absolute frequencies.
    """

    omega_b: float
    kappa_b: float
    kappa_c: float
    kappa_1: float
    kappa_2: float
    g_1: float
    g_2: float
    G0_1: float
    G0_2: float
    delta_c: float
    delta_1: float
    delta_2: float
    effective_detunings: bool
    omega_drive: float
    occupations: BathOccupations
    exact_phonon_shift: bool = False
    G_1_mag: Optional[float] = None
    G_2_mag: Optional[float] = None
    rate_unit: float = 1.0
    warnings: tuple = field(default=(), compare=False)


_RATE_FIELDS = (
    "omega_b", "kappa_b", "kappa_c", "kappa_1", "kappa_2",
    "g_1", "g_2", "G0_1", "G0_2", "delta_c", "delta_1", "delta_2",
    "omega_drive", "G_1_mag", "G_2_mag",
)


def thermal_occupation(omega, T):
    """Bose-Einstein mean occupation ``1 / (exp(hbar omega / k_B T) - 1)``.

    Returns exactly 0 for ``T == 0`` and when the exponent is too large
    to represent.
    """
    if not omega > 0:
        raise ValueError(f"mode frequency must be positive, got {omega!r}")
    if T < 0:
        raise ValueError(f"temperature must be non-negative, got {T!r}")
    if T == 0:
        return 0.0
    x = HBAR * omega / (K_B * T)
    if x > _EXP_MAX:
        return 0.0
    return 1.0 / math.expm1(x)


def drive_coupling_from_power(P, kappa_c, omega_0):
    """Drive rate ``sqrt(2 P kappa_c / (hbar omega_0))`` in rad/s."""
    if P < 0:
        raise ValueError(f"drive power must be non-negative, got {P!r}")
    if not kappa_c > 0:
        raise ValueError(f"kappa_c must be positive, got {kappa_c!r}")
    if not omega_0 > 0:
        raise ValueError(f"omega_0 must be positive, got {omega_0!r}")
    return math.sqrt(2.0 * P * kappa_c / (HBAR * omega_0))


def ionization_temperature(binding_energy):
    """Temperature at which k_B T equals the exciton binding energy."""
    return binding_energy / K_B


def bath_occupations(params):
    # Optical baths are taken at the laser frequency; at T <= 300 K they are
    # empty either way.
    T = params.temperature
    n_opt = thermal_occupation(params.omega_0, T)
    return BathOccupations(
        N_x1=n_opt, N_x2=n_opt, N_c=n_opt,
        N_b=thermal_occupation(params.omega_b, T),
    )


def _check_positive(params, names):
    bad = []
    for name in names:
        value = getattr(params, name)
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            bad.append(name)
    return bad


def validate(params):
    """Check a :class:`SystemParams` and resolve it into a :class:`ValidatedSystem`.

    Raises :class:`ValidationError` naming every non-positive rate.
    Issues :class:`IonizationWarning` when ``k_B T`` exceeds the binding
    energy, and :class:`SidebandWarning` when ``kappa_2 >= omega_b``. The
    warning texts are also kept on the returned record.
    """
    bad = _check_positive(params, (
        "omega_b", "kappa_b", "kappa_c", "kappa_1", "kappa_2",
        "omega_0", "binding_energy",
    ))
    # Couplings may be switched off entirely.
    for name in ("g_1", "g_2", "G0_1", "G0_2"):
        value = getattr(params, name)
        if not (math.isfinite(value) and value >= 0):
            bad.append(name)
    for name in ("G_1_mag", "G_2_mag"):
        value = getattr(params, name)
        if value is not None and not (math.isfinite(value) and value >= 0):
            bad.append(name)
    if not (math.isfinite(params.temperature) and params.temperature >= 0):
        bad.append("temperature")
    if not math.isfinite(params.delta_c):
        bad.append("delta_c")

    if isinstance(params.detuning, (EffectiveDetunings, BareDetunings)):
        delta_1, delta_2 = params.detuning.delta_1, params.detuning.delta_2
        if not (math.isfinite(delta_1) and math.isfinite(delta_2)):
            bad.append("detuning")
    else:
        bad.append("detuning")

    omega_drive = None
    if isinstance(params.drive, DriveAmplitude):
        omega_drive = params.drive.omega_drive
        if not (math.isfinite(omega_drive) and omega_drive >= 0):
            bad.append("drive")
    elif isinstance(params.drive, DrivePower):
        power = params.drive.power
        if not (math.isfinite(power) and power >= 0):
            bad.append("drive")
    else:
        bad.append("drive")

    if bad:
        raise ValidationError("invalid parameter(s): " + ", ".join(bad), bad)

    if omega_drive is None:
        omega_drive = drive_coupling_from_power(
            params.drive.power, params.kappa_c, params.omega_0)

    notes = []
    if K_B * params.temperature > params.binding_energy:
        msg = (f"T = {params.temperature:g} K exceeds the exciton ionization "
               f"temperature {ionization_temperature(params.binding_energy):.1f} K")
        warnings.warn(msg, IonizationWarning, stacklevel=2)
        notes.append(msg)
    if params.kappa_2 >= params.omega_b:
        msg = "kappa_2 >= omega_b: outside the resolved-sideband regime"
        warnings.warn(msg, SidebandWarning, stacklevel=2)
        notes.append(msg)

    return ValidatedSystem(
        omega_b=params.omega_b,
        kappa_b=params.kappa_b,
        kappa_c=params.kappa_c,
        kappa_1=params.kappa_1,
        kappa_2=params.kappa_2,
        g_1=params.g_1,
        g_2=params.g_2,
        G0_1=params.G0_1,
        G0_2=params.G0_2,
        delta_c=params.delta_c,
        delta_1=delta_1,
        delta_2=delta_2,
        effective_detunings=isinstance(params.detuning, EffectiveDetunings),
        omega_drive=omega_drive,
        occupations=bath_occupations(params),
        exact_phonon_shift=params.exact_phonon_shift,
        G_1_mag=params.G_1_mag,
        G_2_mag=params.G_2_mag,
        warnings=tuple(notes),
    )


def normalize(system):
    """Express every rate of ``system`` in units of its mechanical frequency.

    Applying it twice is a no-op, since ``omega_b`` is already 1.
    """
    scale = system.omega_b
    if scale == 1.0:
        return system
    changes = {}
    for name in _RATE_FIELDS:
        value = getattr(system, name)
        changes[name] = None if value is None else value / scale
    changes["omega_b"] = 1.0
    return replace(system, rate_unit=system.rate_unit * scale, **changes)


def baseline_params(**overrides):
    """Parameters of the reference operating point (frequencies as omega = 2pi nu).

    Keyword overrides replace fields of the returned :class:`SystemParams`.
    """
    wb = TWO_PI * 20e9
    params = SystemParams(
        omega_b=wb,
        kappa_b=TWO_PI * 1e6,
        kappa_c=TWO_PI * 10e9,
        kappa_1=TWO_PI * 100e6,
        kappa_2=TWO_PI * 100e6,
        g_1=TWO_PI * 1e9,
        g_2=TWO_PI * 1e9,
        G0_1=TWO_PI * 10e6,
        G0_2=TWO_PI * 20e6,
        delta_c=wb,
        detuning=EffectiveDetunings(-wb, wb),
        drive=DriveAmplitude(TWO_PI * 5.5e12),
        omega_0=TWO_PI * 300e12,
        temperature=1.0,
    )
    return replace(params, **overrides) if overrides else params
