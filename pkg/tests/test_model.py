import math
import warnings
from dataclasses import replace

import mpmath
import pytest
from hypothesis import given, strategies as st

from excitonopt.errors import IonizationWarning, SidebandWarning, ValidationError
from excitonopt.model import (
    HBAR,
    K_B,
    TWO_PI,
    BareDetunings,
    DrivePower,
    baseline_params,
    drive_coupling_from_power,
    ionization_temperature,
    normalize,
    thermal_occupation,
    validate,
)


def bose_einstein_mp(omega, T):
    x = mpmath.mpf(HBAR) * omega / (mpmath.mpf(K_B) * T)
    return float(1 / mpmath.expm1(x))


class TestThermalOccupation:
    def test_mechanical_mode_at_1K(self):
        # oracle: 50-digit evaluation
        with mpmath.workdps(50):
            expected = bose_einstein_mp(TWO_PI * 20e9, 1.0)
        assert expected == pytest.approx(0.6206164582, rel=1e-9)
        assert thermal_occupation(TWO_PI * 20e9, 1.0) == pytest.approx(expected, rel=1e-12)

    def test_zero_temperature(self):
        assert thermal_occupation(TWO_PI * 20e9, 0.0) == 0.0

    def test_optical_mode_underflows_to_zero(self):
        assert thermal_occupation(TWO_PI * 300e12, 1.0) == 0.0

    @pytest.mark.parametrize("omega", [0.0, -1.0])
    def test_non_positive_frequency(self, omega):
        with pytest.raises(ValueError):
            thermal_occupation(omega, 1.0)

    @given(
        st.floats(1e8, 1e15), st.floats(0.01, 500.0), st.floats(1.01, 3.0),
    )
    def test_monotone(self, omega, T, factor):
        n = thermal_occupation(omega, T)
        assert thermal_occupation(omega, T * factor) >= n
        assert thermal_occupation(omega * factor, T) <= n


class TestDrive:
    def test_reference_power(self):
        omega = drive_coupling_from_power(1.89e-3, TWO_PI * 10e9, TWO_PI * 300e12)
        assert omega / TWO_PI == pytest.approx(5.5e12, rel=0.01)

    def test_no_power(self):
        assert drive_coupling_from_power(0.0, 1.0, 1.0) == 0.0

    def test_square_root_law(self):
        a = drive_coupling_from_power(1e-3, TWO_PI * 10e9, TWO_PI * 300e12)
        b = drive_coupling_from_power(4e-3, TWO_PI * 10e9, TWO_PI * 300e12)
        assert b / a == pytest.approx(2.0, rel=1e-14)

    def test_negative_power(self):
        with pytest.raises(ValueError):
            drive_coupling_from_power(-1e-3, 1.0, 1.0)

    @given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_square_is_linear(self, p, q):
        f = lambda P: drive_coupling_from_power(P, TWO_PI * 10e9, TWO_PI * 300e12) ** 2
        assert f(p + q) == pytest.approx(f(p) + f(q), rel=1e-12, abs=1e-300)


class TestValidate:
    def test_baseline_has_no_warnings(self, baseline):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            system = validate(baseline)
        assert system.warnings == ()
        assert system.omega_drive == baseline.drive.omega_drive

    def test_ionization_warning(self, baseline):
        with pytest.warns(IonizationWarning):
            system = validate(replace(baseline, temperature=200.0))
        assert len(system.warnings) == 1

    def test_ionization_threshold_for_10_meV(self):
        assert ionization_temperature(10e-3 * 1.602176634e-19) == pytest.approx(116.0, abs=0.1)

    def test_sideband_note(self, baseline):
        with pytest.warns(SidebandWarning):
            validate(replace(baseline, kappa_2=baseline.omega_b))

    def test_zero_cavity_decay(self, baseline):
        with pytest.raises(ValidationError) as info:
            validate(replace(baseline, kappa_c=0.0))
        assert info.value.fields == ("kappa_c",)
        assert "kappa_c" in str(info.value)

    def test_lists_every_bad_field(self, baseline):
        with pytest.raises(ValidationError) as info:
            validate(replace(baseline, kappa_1=-1.0, omega_b=0.0))
        assert set(info.value.fields) == {"kappa_1", "omega_b"}

    def test_power_drive_is_resolved(self, baseline):
        system = validate(replace(baseline, drive=DrivePower(1.89e-3)))
        assert system.omega_drive / TWO_PI == pytest.approx(5.5e12, rel=0.01)

    def test_detuning_kind(self, baseline):
        assert validate(baseline).effective_detunings
        assert not validate(replace(baseline, detuning=BareDetunings(1.0, 2.0))).effective_detunings

    def test_occupations(self, baseline):
        occ = validate(baseline).occupations
        assert occ.N_b == pytest.approx(0.6206164582, rel=1e-9)
        assert occ.N_c == occ.N_x1 == occ.N_x2 == 0.0


class TestNormalize:
    def test_mechanical_frequency_becomes_one(self, baseline):
        assert normalize(validate(baseline)).omega_b == 1.0

    def test_ratio(self, baseline):
        system = normalize(validate(baseline))
        assert system.kappa_b == pytest.approx(5e-5, rel=1e-14)
        assert system.rate_unit == baseline.omega_b

    def test_idempotent(self, baseline):
        once = normalize(validate(baseline))
        assert normalize(once) == once

    def test_occupations_untouched(self, baseline):
        system = validate(baseline)
        assert normalize(system).occupations == system.occupations

    def test_optional_overrides_are_scaled(self, baseline):
        system = normalize(validate(replace(baseline, G_1_mag=baseline.omega_b / 4)))
        assert system.G_1_mag == pytest.approx(0.25)
        assert system.G_2_mag is None

    def test_baseline_parameters(self):
        p = baseline_params()
        assert p.omega_b / TWO_PI == pytest.approx(20e9)
        assert p.detuning.delta_1 == -p.omega_b
        assert math.isclose(p.G0_2, 2 * p.G0_1)
