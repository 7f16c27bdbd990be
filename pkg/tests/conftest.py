import math

import numpy as np
import pytest
from scipy.linalg import expm

from excitonopt.model import TWO_PI, baseline_params

WB = TWO_PI * 20e9

_ACCEPTANCE_LINES = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    verdict = "PASS" if report.passed else "FAIL"
    _ACCEPTANCE_LINES.append((number, f"[{verdict}] criterion {number}: {title}"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture
def baseline():
    return baseline_params()


def tmsv(r):
    """Two-mode squeezed vacuum covariance matrix (vacuum variance 1/2)."""
    ch, sh = math.cosh(2 * r) / 2, math.sinh(2 * r) / 2
    z = np.diag([1.0, -1.0])
    return np.block([[ch * np.eye(2), sh * z], [sh * z, ch * np.eye(2)]])


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def random_symplectic(rng, n_modes, scale=0.6):
    """exp(J H) with H symmetric is symplectic for J = (+) [[0, 1], [-1, 0]]."""
    j = np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    h = rng.normal(scale=scale, size=(2 * n_modes, 2 * n_modes))
    return expm(j @ (h + h.T) / 2)


def random_physical_cm(rng, n_modes=2):
    """Williamson form S diag(nu) S^T with nu >= 1/2."""
    nu = 0.5 + rng.exponential(1.0, size=n_modes)
    s = random_symplectic(rng, n_modes)
    return s @ np.diag(np.repeat(nu, 2)) @ s.T, np.sort(nu)
