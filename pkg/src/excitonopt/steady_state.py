"""Classical mean-field steady state of the driven four-mode system."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, replace

from .errors import ConvergenceError

MAX_ITERATIONS = 1000
RTOL = 1e-12
_ATOL = 1e-30


@dataclass(frozen=True)
class SteadyState:
    """Mean amplitudes, effective detunings and effective couplings.

    Rates are in the units of the system they were computed from.
    """

    avg_c: complex
    avg_x1: complex
    avg_x2: complex
    avg_b: complex
    eff_delta_1: float
    eff_delta_2: float
    G_1: complex
    G_2: complex
    iterations: int = 0


def _phonon_amplitude(system, avg_x1, avg_x2):
    drive = system.G0_1 * abs(avg_x1) ** 2 + system.G0_2 * abs(avg_x2) ** 2
    if system.exact_phonon_shift:
        return -1j * drive / (1j * system.omega_b + system.kappa_b)
    return complex(-drive / system.omega_b)


def effective_couplings(state, system):
    """Return ``(G_1, G_2) = (i G0_1 <x_1>, i G0_2 <x_2>)``."""
    return 1j * system.G0_1 * state.avg_x1, 1j * system.G0_2 * state.avg_x2


def solve_effective(system, eff_delta_1, eff_delta_2):
    """Closed-form mean fields for given effective exciton detunings."""
    chi_1 = 1j * eff_delta_1 + system.kappa_1
    chi_2 = 1j * eff_delta_2 + system.kappa_2
    chi_c = 1j * system.delta_c + system.kappa_c
    denom = (system.g_1 ** 2 * chi_2 + system.g_2 ** 2 * chi_1
             + chi_c * chi_1 * chi_2)
    avg_c = system.omega_drive * chi_1 * chi_2 / denom
    avg_x1 = -1j * system.g_1 * avg_c / chi_1
    avg_x2 = -1j * system.g_2 * avg_c / chi_2
    state = SteadyState(
        avg_c=complex(avg_c),
        avg_x1=complex(avg_x1),
        avg_x2=complex(avg_x2),
        avg_b=_phonon_amplitude(system, avg_x1, avg_x2),
        eff_delta_1=float(eff_delta_1),
        eff_delta_2=float(eff_delta_2),
        G_1=0j,
        G_2=0j,
    )
    G_1, G_2 = effective_couplings(state, system)
    return replace(state, G_1=complex(G_1), G_2=complex(G_2))


def solve_self_consistent(system):
    """Fixed-point iteration on the mean phonon amplitude for bare detunings.

    ``system.delta_1``/``delta_2`` are taken as the bare detunings. Starting
    from ``<b> = 0``, the effective detunings ``delta_k + 2 G0_k Re<b>`` are
    recomputed until ``<b>`` changes by less than 1e-12 relative.
    """
    avg_b = 0j
    state = None
    for iteration in range(1, MAX_ITERATIONS + 1):
        shift = 2.0 * avg_b.real
        state = solve_effective(
            system,
            system.delta_1 + system.G0_1 * shift,
            system.delta_2 + system.G0_2 * shift,
        )
        change = abs(state.avg_b - avg_b)
        avg_b = state.avg_b
        if change <= RTOL * abs(avg_b) + _ATOL:
            # Report detunings consistent with the converged <b>.
            shift = 2.0 * avg_b.real
            final = solve_effective(
                system,
                system.delta_1 + system.G0_1 * shift,
                system.delta_2 + system.G0_2 * shift,
            )
            return replace(final, iterations=iteration)
    raise ConvergenceError(
        f"mean-field iteration did not converge in {MAX_ITERATIONS} steps "
        "(possible multistability)",
        last=replace(state, iterations=MAX_ITERATIONS),
    )


def solve(system):
    """Dispatch on the kind of detunings held by ``system``."""
    if system.effective_detunings:
        return solve_effective(system, system.delta_1, system.delta_2)
    return solve_self_consistent(system)


def override_coupling_magnitudes(state, G_1_mag=None, G_2_mag=None):
    """Replace |G_k| while keeping the phases of the mean-field couplings.

    A vanishing mean-field coupling has no phase; the override is then
    taken as real and positive.
    """
    G_1, G_2 = state.G_1, state.G_2
    if G_1_mag is not None:
        G_1 = G_1_mag * cmath.exp(1j * cmath.phase(G_1))
    if G_2_mag is not None:
        G_2 = G_2_mag * cmath.exp(1j * cmath.phase(G_2))
    return replace(state, G_1=complex(G_1), G_2=complex(G_2))
