"""Single-point evaluation: parameters in, entanglement report out."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import dynamics, gaussian, steady_state
from .model import normalize, validate

DEFAULT_BIPARTITIONS = (("x1", "x2"),)


@dataclass(frozen=True)
class EntanglementReport:
    """Result of one pipeline evaluation.

    ``entanglement`` maps each requested mode pair to its logarithmic
    negativity (NaN when the point is unstable). ``nu_min`` is the smallest
    partially transposed symplectic eigenvalue of the first pair. ``max_re``
    is the largest real part of the drift eigenvalues in 1/s. ``G_1`` and
    ``G_2`` are the effective couplings in rad/s.
    """

    entanglement: dict
    nu_min: float
    n_eff: float
    stable: bool
    max_re: float
    G_1: complex = 0j
    G_2: complex = 0j
    status: str = "ok"
    warnings: tuple = ()
    covariance: np.ndarray = field(default=None, repr=False, compare=False)


def pair_label(pair):
    return f"{pair[0]}_{pair[1]}"


def covariance_matrix(params):
    """Steady-state 8x8 covariance matrix of ``params`` (raises if unstable)."""
    system = normalize(validate(params))
    state = _state(system)
    a = dynamics.build_drift(state, system)
    return dynamics.solve_lyapunov(a, dynamics.build_diffusion(system))


def _state(system):
    state = steady_state.solve(system)
    if system.G_1_mag is not None or system.G_2_mag is not None:
        state = steady_state.override_coupling_magnitudes(
            state, system.G_1_mag, system.G_2_mag)
    return state


def evaluate(system, bipartitions=DEFAULT_BIPARTITIONS):
    """Run the dynamics and Gaussian analysis on a validated system."""
    system = normalize(system)
    unit = system.rate_unit
    state = _state(system)
    a = dynamics.build_drift(state, system)
    stability = dynamics.is_stable(a)
    G_1, G_2 = state.G_1 * unit, state.G_2 * unit
    if not stability.stable:
        nan = math.nan
        return EntanglementReport(
            entanglement={tuple(p): nan for p in bipartitions},
            nu_min=nan, n_eff=nan, stable=False,
            max_re=stability.max_re * unit, G_1=G_1, G_2=G_2,
            status="unstable", warnings=system.warnings,
        )
    v = dynamics.solve_lyapunov(a, dynamics.build_diffusion(system), check_stability=False)
    entanglement = {}
    nu_min = math.nan
    for k, pair in enumerate(bipartitions):
        v4 = gaussian.reduce(v, pair)
        entanglement[tuple(pair)] = gaussian.logarithmic_negativity(v4)
        if k == 0:
            nu_min = gaussian.min_pt_eigenvalue(v4)
    return EntanglementReport(
        entanglement=entanglement,
        nu_min=nu_min,
        n_eff=float(gaussian.effective_phonon_number(v)),
        stable=True,
        max_re=stability.max_re * unit,
        G_1=G_1, G_2=G_2,
        warnings=system.warnings,
        covariance=v,
    )


def run_point(params, bipartitions=DEFAULT_BIPARTITIONS):
    """Full pipeline for one :class:`~excitonopt.model.SystemParams`.

    Unstable points are reported with ``stable=False`` and NaN figures of
    merit; validation and convergence failures propagate as exceptions.
    """
    return evaluate(validate(params), bipartitions)
