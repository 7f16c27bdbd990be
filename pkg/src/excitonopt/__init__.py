"""Steady-state entanglement of two exciton modes in a driven exciton-optomechanical cavity."""

from .errors import (
    ConfigError,
    ConvergenceError,
    IonizationWarning,
    NumericalError,
    SidebandWarning,
    StabilityError,
    ValidationError,
)
from .model import (
    BareDetunings,
    DriveAmplitude,
    DrivePower,
    EffectiveDetunings,
    SystemParams,
    baseline_params,
    drive_coupling_from_power,
    normalize,
    thermal_occupation,
    validate,
)
from .pipeline import EntanglementReport, covariance_matrix, run_point
from .sweep import Axis, GridResult, SweepConfig, run_sweep, scenario

__version__ = "0.1.0"
