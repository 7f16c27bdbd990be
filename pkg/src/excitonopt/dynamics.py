"""Linearized quadrature dynamics: drift, diffusion, stability, Lyapunov solve.

Quadratures are ordered ``(X_x1, Y_x1, X_x2, Y_x2, X_c, Y_c, X_b, Y_b)``
with ``X = (a + a^dag)/sqrt(2)``, so the vacuum covariance matrix is I/2.
"""

from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np
import scipy.linalg
from scipy.linalg import LinAlgWarning

from .errors import NumericalError, StabilityError

STABILITY_MARGIN = 1e-9
LYAPUNOV_RTOL = 1e-10
REFINEMENT_STEPS = 3

MODES = ("x1", "x2", "c", "b")


class Stability(NamedTuple):
    stable: bool
    max_re: float


def build_drift(state, system):
    """8x8 drift matrix of the linearized quantum Langevin equations."""
    d1, d2 = state.eff_delta_1, state.eff_delta_2
    k1, k2, kc, kb = system.kappa_1, system.kappa_2, system.kappa_c, system.kappa_b
    g1, g2 = system.g_1, system.g_2
    dc, wb = system.delta_c, system.omega_b
    re1, im1 = state.G_1.real, state.G_1.imag
    re2, im2 = state.G_2.real, state.G_2.imag
    return np.array([
        [-k1, d1, 0, 0, 0, g1, -2 * re1, 0],
        [-d1, -k1, 0, 0, -g1, 0, -2 * im1, 0],
        [0, 0, -k2, d2, 0, g2, -2 * re2, 0],
        [0, 0, -d2, -k2, -g2, 0, -2 * im2, 0],
        [0, g1, 0, g2, -kc, dc, 0, 0],
        [-g1, 0, -g2, 0, -dc, -kc, 0, 0],
        [0, 0, 0, 0, 0, 0, -kb, wb],
        [-2 * im1, 2 * re1, -2 * im2, 2 * re2, 0, 0, -wb, -kb],
    ], dtype=float)


def build_diffusion(system, occupations=None):
    """Diagonal diffusion matrix ``kappa_j (2 N_j + 1)``, two entries per mode."""
    occ = system.occupations if occupations is None else occupations
    entries = [
        system.kappa_1 * (2 * occ.N_x1 + 1),
        system.kappa_2 * (2 * occ.N_x2 + 1),
        system.kappa_c * (2 * occ.N_c + 1),
        system.kappa_b * (2 * occ.N_b + 1),
    ]
    return np.diag(np.repeat(entries, 2))


def is_stable(a, margin=STABILITY_MARGIN):
    """Stable iff every eigenvalue of ``a`` has real part below ``-margin``.

    ``margin`` is in the units of ``a``; the default is meant for matrices
    normalized to the mechanical frequency.
    """
    try:
        eigenvalues = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue computation failed: {exc}") from exc
    if not np.all(np.isfinite(eigenvalues)):
        raise NumericalError("non-finite eigenvalues in drift matrix")
    max_re = float(np.max(eigenvalues.real))
    return Stability(max_re < -margin, max_re)


def lyapunov_residual(a, v, d):
    return float(np.linalg.norm(a @ v + v @ a.T + d))


def solve_lyapunov(a, d, check_stability=True):
    """Steady-state covariance matrix from ``A V + V A^T = -D``.

    Solved as the dense Kronecker system ``(I x A + A x I) vec V = -vec D``
    and symmetrized afterwards. Raises :class:`StabilityError` for an
    unstable ``a`` and :class:`NumericalError` when the residual exceeds
    ``1e-10 ||D||_F``.
    """
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    n = a.shape[0]
    if check_stability:
        # Margin relative to the matrix scale, so SI and normalized inputs agree.
        scale = max(float(np.max(np.abs(np.diag(a)))), 1e-300)
        stability = is_stable(a / scale)
        if not stability.stable:
            raise StabilityError(
                f"drift matrix is not stable (max Re eig = {stability.max_re * scale:.3e})")
    eye = np.eye(n)
    # vec() is column-major: vec(A V) = (I x A) vec V, vec(V A^T) = (A x I) vec V
    lhs = np.kron(eye, a) + np.kron(a, eye)
    with warnings.catch_warnings():
        warnings.simplefilter("error", LinAlgWarning)
        try:
            lu = scipy.linalg.lu_factor(lhs, check_finite=True)
        except (np.linalg.LinAlgError, LinAlgWarning, ValueError) as exc:
            raise NumericalError(f"singular Lyapunov system: {exc}") from exc

    def _solve(rhs):
        return scipy.linalg.lu_solve(lu, rhs.reshape(-1, order="F")).reshape((n, n), order="F")

    bound = LYAPUNOV_RTOL * float(np.linalg.norm(d))
    v = _solve(-d)
    v = 0.5 * (v + v.T)
    residual = lyapunov_residual(a, v, d)
    # Iterative refinement on the residual; needed close to marginal stability.
    for _ in range(REFINEMENT_STEPS):
        if residual <= bound:
            break
        correction = _solve(-(a @ v + v @ a.T + d))
        candidate = v + 0.5 * (correction + correction.T)
        candidate_residual = lyapunov_residual(a, candidate, d)
        if not candidate_residual < residual:
            break
        v, residual = candidate, candidate_residual
    if not residual <= bound:
        raise NumericalError(
            f"Lyapunov residual {residual:.3e} exceeds tolerance {bound:.3e}")
    return v
