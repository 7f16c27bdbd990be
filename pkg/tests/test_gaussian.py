import math
from fractions import Fraction
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import block_diag

from excitonopt import gaussian
from excitonopt.errors import NumericalError
from excitonopt.model import baseline_params, validate
from excitonopt.pipeline import covariance_matrix

from conftest import random_physical_cm, rotation, tmsv

PAIRS = [("x1", "x2"), ("x1", "c"), ("x1", "b"), ("x2", "c"), ("x2", "b"), ("c", "b")]


@pytest.fixture(scope="module")
def baseline_cm():
    return covariance_matrix(baseline_params())


class TestSymplecticForm:
    def test_properties(self):
        om = gaussian.symplectic_form(2)
        np.testing.assert_array_equal(om, -om.T)
        np.testing.assert_array_equal(om @ om, -np.eye(4))
        np.testing.assert_array_equal(gaussian.PT_FIRST @ gaussian.PT_FIRST, np.eye(4))


class TestReduce:
    @pytest.mark.parametrize("pair", PAIRS)
    def test_vacuum(self, pair):
        np.testing.assert_array_equal(gaussian.reduce(np.eye(8) / 2, pair), np.eye(4) / 2)

    def test_submatrix(self):
        rng = np.random.default_rng(3)
        m = rng.normal(size=(8, 8))
        v = m @ m.T
        v4 = gaussian.reduce(v, ("x2", "b"))
        np.testing.assert_array_equal(v4, v4.T)
        np.testing.assert_array_equal(np.diag(v4), np.diag(v)[[2, 3, 6, 7]])
        np.testing.assert_array_equal(gaussian.reduce(v, ("b", "x2")), v4)

    def test_same_mode(self):
        with pytest.raises(ValueError):
            gaussian.reduce(np.eye(8), ("x1", "x1"))

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            gaussian.reduce(np.eye(8), ("x1", "q"))

    def test_exciton_correlations_at_optimum(self, baseline_cm):
        v4 = gaussian.reduce(baseline_cm, ("x1", "x2"))
        assert np.abs(v4[:2, 2:]).max() > 1e-3


class TestSymplecticEigenvalues:
    def test_vacuum(self):
        assert gaussian.symplectic_eigenvalues(np.eye(4) / 2) == pytest.approx((0.5, 0.5))

    def test_thermal(self):
        v = np.diag([3.5, 3.5, 1.2, 1.2])
        assert gaussian.symplectic_eigenvalues(v) == pytest.approx((1.2, 3.5), rel=1e-12)

    @pytest.mark.parametrize("r", [0.1, 1.0, 2.0])
    def test_tmsv_is_pure(self, r):
        assert gaussian.symplectic_eigenvalues(tmsv(r)) == pytest.approx((0.5, 0.5), abs=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_williamson_spectrum_recovered(self, seed):
        v, nu = random_physical_cm(np.random.default_rng(seed))
        got = gaussian.symplectic_eigenvalues(v)
        np.testing.assert_allclose(got, nu, rtol=1e-8)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_routes_agree_after_transposition(self, seed):
        v, _ = random_physical_cm(np.random.default_rng(seed))
        pt = gaussian.partial_transpose(v)
        closed = gaussian._closed_form(pt)
        routed = gaussian.symplectic_spectrum(pt)
        assert abs(closed[0] - routed[0]) <= 1e-9 * max(1.0, closed[1])

    @pytest.mark.parametrize("r", [1e-4, 0.1])
    def test_closed_form_near_degenerate(self, r):
        # double-precision invariants would lose ~8 digits here
        assert gaussian._closed_form(tmsv(r)) == pytest.approx((0.5, 0.5), abs=1e-13)

    def test_exact_determinant(self):
        m = [[Fraction(x) for x in row] for row in ((0, 2, 1), (3, 0, 0), (1, 1, 4))]
        assert gaussian._det_exact(m) == -21

    def test_route_mismatch_is_reported(self, monkeypatch):
        monkeypatch.setattr(gaussian, "symplectic_spectrum",
                            lambda v: np.array([0.7, 0.9]))
        with pytest.raises(NumericalError):
            gaussian.symplectic_eigenvalues(np.eye(4) / 2)

    def test_general_spectrum(self):
        v = np.diag([1.5, 1.5, 0.5, 0.5, 2.0, 2.0])
        np.testing.assert_allclose(gaussian.symplectic_spectrum(v), [0.5, 1.5, 2.0])


class TestLogarithmicNegativity:
    def test_vacuum(self):
        assert gaussian.logarithmic_negativity(np.eye(4) / 2) == 0.0

    @pytest.mark.parametrize("r", [0.1, 0.5, 1.0, 2.0])
    def test_tmsv(self, r):
        assert gaussian.logarithmic_negativity(tmsv(r)) == pytest.approx(2 * r, abs=1e-9)

    def test_unphysical_rejected(self):
        with pytest.raises(ValueError):
            gaussian.logarithmic_negativity(0.4 * np.eye(4))

    def test_baseline_excitons_entangled(self, baseline_cm):
        assert gaussian.logarithmic_negativity(gaussian.reduce(baseline_cm, ("x1", "x2"))) > 0

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_either_mode_can_be_transposed(self, seed):
        v, _ = random_physical_cm(np.random.default_rng(seed))
        first = gaussian.symplectic_spectrum(gaussian.partial_transpose(v, 0))
        second = gaussian.symplectic_spectrum(gaussian.partial_transpose(v, 1))
        np.testing.assert_allclose(first, second, rtol=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
    def test_local_rotation_invariance(self, seed, t1, t2):
        v, _ = random_physical_cm(np.random.default_rng(seed))
        r = block_diag(rotation(t1), rotation(t2))
        before = gaussian.logarithmic_negativity(v)
        after = gaussian.logarithmic_negativity(r @ v @ r.T)
        assert abs(after - before) < 1e-9


class TestPhononNumber:
    def test_ground_state(self):
        assert gaussian.effective_phonon_number(np.eye(8) / 2) == 0.0

    def test_decoupled_phonon_at_1K(self, baseline):
        params = replace(baseline, G0_1=0.0, G0_2=0.0)
        n = gaussian.effective_phonon_number(covariance_matrix(params))
        assert n == pytest.approx(validate(params).occupations.N_b, abs=1e-9)
        assert n == pytest.approx(0.62, abs=0.005)

    def test_baseline_cooling(self, baseline_cm):
        assert gaussian.effective_phonon_number(baseline_cm) == pytest.approx(0.44, abs=0.05)


class TestPhysicality:
    def test_vacuum(self):
        assert gaussian.check_physicality(np.eye(8) / 2)
        assert gaussian.check_physicality(np.eye(4) / 2)

    def test_sub_vacuum(self):
        assert not gaussian.check_physicality(0.4 * np.eye(4))

    def test_negative_definite(self):
        assert not gaussian.check_physicality(-np.eye(4) / 2)

    def test_asymmetric(self):
        v = np.eye(4) / 2
        v[0, 1] = 0.1
        assert not gaussian.check_physicality(v)

    def test_baseline(self, baseline_cm):
        assert gaussian.check_physicality(baseline_cm)
