import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from octoarm.errors import CoilModelError, IntegrationDiverged, ModelDomainError
from octoarm.tcam import (
    TcamParams,
    contraction_response,
    fiber_radius,
    integrate_temperature,
    linearization_coefficient,
    mech_state,
    temperature_rate,
    tension,
)

P = TcamParams()


class TestThermal:
    def test_time_constant(self):
        assert P.time_constant_s == pytest.approx(18.837209, rel=1e-6)

    def test_free_decay_matches_exponential(self):
        hist = integrate_temperature(P, lambda t: 0.0, 20.0, 1e-3, temp0=50.0)
        expected = 50.0 * math.exp(-20.0 / P.time_constant_s)
        assert hist.time_s[-1] == pytest.approx(20.0)
        assert hist.temp_excess_C[-1] == pytest.approx(expected, rel=1e-8)

    def test_constant_drive_fixed_point(self):
        assert P.steady_temp_excess(3.0) == pytest.approx(58.1395, rel=1e-5)
        hist = integrate_temperature(P, lambda t: 3.0, 10 * P.time_constant_s, 1e-2)
        assert hist.temp_excess_C[-1] == pytest.approx(58.1395, rel=1e-3)

    def test_sine_drive_peak(self):
        hist = integrate_temperature(P, lambda t: 9.0 * math.sin(t), 2 * math.pi, 1e-3)
        assert hist.temp_excess_C.max() + P.ambient_temp_C == pytest.approx(98.1677, abs=1e-3)
        assert hist.voltage_V[0] == 0.0
        assert len(hist) == 6284

    def test_rate_uses_conductivity_override(self):
        doubled = temperature_rate(P, 10.0, 0.0, conductivity=lambda T: 2 * P.conductivity_WperC)
        assert doubled == pytest.approx(2 * temperature_rate(P, 10.0, 0.0))

    def test_runaway_conductivity_diverges(self):
        with pytest.raises(IntegrationDiverged) as info:
            integrate_temperature(P, lambda t: 1.0, 5.0, 1e-2, conductivity=lambda T: -1e5)
        assert info.value.last_state is not None

    @given(st.floats(0.0, 12.0), st.floats(0.0, 100.0))
    def test_heating_approaches_fixed_point(self, volts, start):
        target = P.steady_temp_excess(volts)
        rate = temperature_rate(P, start, volts)
        assert np.sign(rate) == np.sign(target - start) or abs(target - start) < 1e-9


class TestCoil:
    def test_cold_state(self):
        m = mech_state(P, 0.0)
        assert m.bending_stiffness_Nm2 == pytest.approx(6.1605e-6, rel=1e-4)
        assert m.torsion_stiffness_Nm2 == pytest.approx(5.8043e-7, rel=1e-4)
        assert m.coil_angle_rad == pytest.approx(1.01246, rel=1e-5)
        assert m.length_m == pytest.approx(0.243697, rel=1e-5)
        assert m.spring_coeff_Npm == pytest.approx(4.26703, rel=1e-5)
        assert m.damping_coeff_Nspm == pytest.approx(0.0974044, rel=1e-5)

    def test_warm_spring_is_stiffer(self):
        assert mech_state(P, 75.0).spring_coeff_Npm == pytest.approx(4.531007, rel=1e-6)

    def test_linearization_coefficient(self):
        assert linearization_coefficient(P) == pytest.approx(8.077758e-4, rel=1e-6)

    def test_linearization_small_reference_limit(self):
        h = 1e-4
        k0 = mech_state(P, 0.0).spring_coeff_Npm
        slope = (mech_state(P, h).length_m - mech_state(P, -h).length_m) / (2 * h)
        assert linearization_coefficient(P, 1e-3) == pytest.approx(-k0 * slope, rel=1e-3)

    def test_soft_bending_is_rejected(self):
        with pytest.raises(CoilModelError):
            mech_state(TcamParams(shear_modulus_Pa=3e8), 0.0)

    @pytest.mark.parametrize("field", ["turns", "resistance_ohm", "fiber_radius0_m"])
    def test_nonpositive_parameters_rejected(self, field):
        with pytest.raises(ModelDomainError):
            TcamParams(**{field: 0.0})

    @given(st.floats(0.0, 200.0), st.floats(0.0, 200.0))
    def test_radius_monotone(self, t1, t2):
        lo, hi = sorted((t1, t2))
        assert fiber_radius(P, lo) <= fiber_radius(P, hi)


class TestMuscle:
    def test_tension_is_linear(self):
        temps = np.array([0.0, 10.0, 20.0])
        np.testing.assert_allclose(tension(P, 0.5, temps), [0.0, 5.0, 10.0])
        with pytest.raises(ValueError):
            tension(P, -1.0, 1.0)

    def test_step_response_matches_damped_oscillator(self):
        dt, duration, b = 1e-4, 2.0, 0.05
        temps = np.ones(int(round(duration / dt)) + 1)
        d = contraction_response(P, 1.0, temps, dt, damping=b)
        k, m = mech_state(P, 0.0).spring_coeff_Npm, P.mass_kg
        w0 = math.sqrt(k / m)
        zeta = b / (2 * math.sqrt(k * m))
        wd = w0 * math.sqrt(1 - zeta**2)
        t = np.arange(temps.size) * dt
        exact = (1 / k) * (1 - np.exp(-zeta * w0 * t) * (np.cos(wd * t) + zeta / math.sqrt(1 - zeta**2) * np.sin(wd * t)))
        assert np.abs(d - exact).max() < 1e-6

    def test_undamped_frequency(self):
        dt = 1e-3
        temps = np.ones(4001)
        d = contraction_response(P, 1.0, temps, dt, damping=0.0)
        k = mech_state(P, 0.0).spring_coeff_Npm
        centered = d - 1.0 / k
        crossings = np.flatnonzero(np.diff(np.sign(centered)) > 0)
        period = np.diff(crossings).mean() * dt
        assert period == pytest.approx(2 * math.pi * math.sqrt(P.mass_kg / k), rel=5e-3)

    def test_contraction_starts_at_rest(self):
        d = contraction_response(P, linearization_coefficient(P), np.full(100, 50.0), 1e-3)
        assert d[0] == 0.0 and d[-1] > 0.0
