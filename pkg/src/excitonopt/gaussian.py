"""Gaussian-state quantities derived from a quadrature covariance matrix.

Vacuum variance is 1/2, so a covariance matrix is physical iff all its
symplectic eigenvalues are at least 1/2.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .dynamics import MODES
from .errors import NumericalError

PHYSICAL_ATOL = 1e-9
UNPHYSICAL_ATOL = 1e-6
ROUTE_TOL = 1e-9

# Partial transposition of the first mode: Y -> -Y
PT_FIRST = np.diag([1.0, -1.0, 1.0, 1.0])
PT_SECOND = np.diag([1.0, 1.0, 1.0, -1.0])


def symplectic_form(n_modes):
    """Block-diagonal ``(+) i sigma_y = [[0, 1], [-1, 0]]`` for ``n_modes`` modes."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def mode_index(mode):
    try:
        return MODES.index(mode)
    except ValueError:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}") from None


def reduce(v, modes):
    """4x4 covariance matrix of two modes, kept in canonical mode order."""
    first, second = modes
    i, j = mode_index(first), mode_index(second)
    if i == j:
        raise ValueError(f"bipartition needs two distinct modes, got {modes!r}")
    i, j = sorted((i, j))
    idx = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
    return np.asarray(v)[np.ix_(idx, idx)]


def symplectic_spectrum(v):
    """All symplectic eigenvalues of a 2n x 2n covariance matrix, ascending.

    Eigenvalues of ``i Omega V`` come in pairs ``+-nu``; one of each pair
    is returned.
    """
    v = np.asarray(v, dtype=float)
    n = v.shape[0] // 2
    try:
        eig = np.linalg.eigvals(1j * symplectic_form(n) @ v)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symplectic eigenvalue computation failed: {exc}") from exc
    moduli = np.sort(np.abs(eig))
    return moduli[::2]


def _det_exact(m):
    """Exact determinant of a small matrix of Fractions (Gaussian elimination)."""
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        pivot = next((r for r in range(k, n) if m[r][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            det = -det
        det *= m[k][k]
        for r in range(k + 1, n):
            f = m[r][k] / m[k][k]
            if f:
                for c in range(k, n):
                    m[r][c] -= f * m[k][c]
    return det


def _closed_form(v4):
    """``(nu_minus, nu_plus)`` from the invariants ``det V`` and
    ``det A + det B + 2 det C``.

    The invariants are evaluated exactly on the floating-point entries, so
    the discriminant does not cancel when the spectrum is nearly degenerate.
    """
    m = [[Fraction(float(x)) for x in row] for row in v4]
    det_total = _det_exact(m)
    seralian = (_det_exact([r[:2] for r in m[:2]]) + _det_exact([r[2:] for r in m[2:]])
                + 2 * _det_exact([r[2:] for r in m[:2]]))
    disc = max(float(seralian * seralian - 4 * det_total), 0.0)
    nu_plus_sq = 0.5 * (float(seralian) + math.sqrt(disc))
    # nu_-^2 nu_+^2 = det V avoids cancellation when nu_- << nu_+
    nu_minus_sq = float(det_total) / nu_plus_sq if nu_plus_sq > 0 else 0.0
    return math.sqrt(max(nu_minus_sq, 0.0)), math.sqrt(max(nu_plus_sq, 0.0))


def symplectic_eigenvalues(v4):
    """Two-mode symplectic eigenvalues ``(nu_minus, nu_plus)``.

    Computed from the determinant invariants and cross-checked against the
    eigenvalues of ``i Omega V``; disagreement beyond 1e-9 (relative to
    ``max(1, nu_plus)``) raises :class:`NumericalError`.
    """
    v4 = np.asarray(v4, dtype=float)
    if v4.shape != (4, 4):
        raise ValueError(f"expected a 4x4 covariance matrix, got shape {v4.shape}")
    closed = _closed_form(v4)
    routed = symplectic_spectrum(v4)
    tol = ROUTE_TOL * max(1.0, closed[1])
    if abs(closed[0] - routed[0]) > tol or abs(closed[1] - routed[1]) > tol:
        raise NumericalError(
            f"symplectic eigenvalue routes disagree: closed form {closed}, "
            f"eigensolver {tuple(routed)}")
    return closed


def partial_transpose(v4, mode=0):
    p = PT_FIRST if mode == 0 else PT_SECOND
    return p @ np.asarray(v4, dtype=float) @ p


def min_pt_eigenvalue(v4):
    """Smallest symplectic eigenvalue of the partially transposed state."""
    return symplectic_eigenvalues(partial_transpose(v4))[0]


def logarithmic_negativity(v4):
    """``max(0, -ln 2 nu)`` with nu the smallest partially transposed symplectic eigenvalue."""
    nu = symplectic_eigenvalues(v4)[0]
    if nu < 0.5 - UNPHYSICAL_ATOL:
        raise ValueError(f"covariance matrix is unphysical (nu_minus = {nu:.6g} < 1/2)")
    nu_pt = min_pt_eigenvalue(v4)
    return max(0.0, -math.log(2.0 * nu_pt))


def effective_phonon_number(v):
    """Mean phonon number ``(V_77 + V_88 - 1) / 2`` from the mechanical quadratures."""
    v = np.asarray(v)
    return 0.5 * (v[6, 6] + v[7, 7] - 1.0)


def check_physicality(v, atol=PHYSICAL_ATOL):
    """True iff ``v`` is positive definite with all symplectic eigenvalues >= 1/2."""
    v = np.asarray(v, dtype=float)
    if not np.allclose(v, v.T, rtol=1e-12, atol=1e-14):
        return False
    if np.min(np.linalg.eigvalsh(v)) <= 0:
        return False
    return bool(symplectic_spectrum(v)[0] >= 0.5 - atol)

