"""Electro-thermal TCAM actuator: voltage -> temperature -> tension.

The thermal part is a lumped first-order heat balance driven by Joule
heating. The mechanical part maps fiber-radius growth to bending/torsion
stiffness, coil angle, muscle length and spring rate, and linearises the
muscle force about a reference temperature.

Naming: ``coil_angle_rad`` for the coil angle, ``damping_coeff`` for the
damper, ``viscosity_Pa_s`` for the Kelvin-Voigt viscosity and ``c_lin`` for
the linearisation constant.
"""

from dataclasses import dataclass, fields
import math

import numpy as np

from .errors import CoilModelError, IntegrationDiverged, ModelDomainError
from .integrate import rk4_step

DEFAULT_REF_TEMP_EXCESS = 75.0


@dataclass(frozen=True)
class TcamParams:
    """Carbon-fiber/silicone TCAM constants (SI units, temperatures in C).

    ``thermal_mass_JperC`` and ``conductivity_WperC`` are the lumped products
    m*c_p and h*A_s; the factors are never needed separately.
    """

    mass_kg: float = 0.106
    external_mass_kg: float = 0.106
    fiber_length_m: float = 0.46
    ambient_length_m: float = 0.418
    turns: float = 200.0
    fiber_radius0_m: float = 3.6e-4
    ambient_temp_C: float = 23.0
    cte_radial_perC: float = 3e-4
    thermal_mass_JperC: float = 0.162
    resistance_ohm: float = 18.0
    axial_modulus_Pa: float = 4.67e8
    shear_modulus_Pa: float = 2.2e7
    conductivity_WperC: float = 0.0086
    viscosity_Pa_s: float = 1.0e5
    gravity_mps2: float = 9.81

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (math.isfinite(value) and value > 0):
                raise ModelDomainError(f"tcam.{f.name} must be finite and > 0, got {value!r}")
        if self.fiber_radius0_m >= self.fiber_length_m:
            raise ModelDomainError("tcam.fiber_radius0_m must be smaller than tcam.fiber_length_m")
        if self.turns < 1:
            raise ModelDomainError("tcam.turns must be >= 1")

    @property
    def time_constant_s(self):
        return self.thermal_mass_JperC / self.conductivity_WperC

    def steady_temp_excess(self, voltage):
        """Fixed point of the heat balance for a constant voltage."""
        return voltage**2 / (self.resistance_ohm * self.conductivity_WperC)


@dataclass(frozen=True)
class ThermalState:
    time_s: float
    temp_excess_C: float


@dataclass(frozen=True)
class ThermalHistory:
    """Uniformly sampled temperature excess, starting at ``time_s[0]``."""

    time_s: np.ndarray
    temp_excess_C: np.ndarray
    voltage_V: np.ndarray

    def __len__(self):
        return self.time_s.size

    def __iter__(self):
        for t, temp in zip(self.time_s, self.temp_excess_C):
            yield ThermalState(float(t), float(temp))

    @property
    def dt(self):
        return float(self.time_s[1] - self.time_s[0]) if len(self) > 1 else 0.0


@dataclass(frozen=True)
class TcamMechState:
    bending_stiffness_Nm2: float
    torsion_stiffness_Nm2: float
    coil_angle_rad: float
    length_m: float
    spring_coeff_Npm: float
    damping_coeff_Nspm: float


def fiber_radius(params, temp_excess):
    """Fiber radius after linear radial thermal expansion."""
    r = params.fiber_radius0_m * (1.0 + params.cte_radial_perC * np.asarray(temp_excess, dtype=float))
    if np.any(r <= 0):
        raise ModelDomainError("fiber radius is non-positive for the given temperature excess")
    return r if np.ndim(r) else float(r)


def temperature_rate(params, temp_excess, voltage, conductivity=None):
    """Rate of change of the temperature excess (C/s).

    Args:
        conductivity: optional callable ``temp_excess -> W/C`` replacing the
            constant ``params.conductivity_WperC``.
    """
    lam = params.conductivity_WperC if conductivity is None else conductivity(temp_excess)
    ct = params.thermal_mass_JperC
    return voltage**2 / (ct * params.resistance_ohm) - (lam / ct) * temp_excess


def integrate_temperature(params, voltage_fn, t_end, dt=1e-3, temp0=0.0, conductivity=None):
    """Integrate the heat balance from ``temp0`` with fixed-step RK4.

    The number of steps is ``round(t_end / dt)``; the returned history
    includes the initial sample.
    """
    if not dt > 0:
        raise ValueError("dt must be > 0")
    if t_end < dt:
        raise ValueError("t_end must be >= dt")
    n = int(round(t_end / dt))
    times = np.arange(n + 1) * dt
    temps = np.empty(n + 1)
    temps[0] = temp0

    def rhs(t, y):
        return temperature_rate(params, y, voltage_fn(t), conductivity)

    y = float(temp0)
    for k in range(n):
        y = rk4_step(rhs, times[k], y, dt)
        if not math.isfinite(y):
            raise IntegrationDiverged(
                f"temperature diverged at t={times[k + 1]:.6g} s",
                last_state=ThermalState(float(times[k]), float(temps[k])),
            )
        temps[k + 1] = y
    volts = np.array([voltage_fn(t) for t in times], dtype=float)
    return ThermalHistory(times, temps, volts)


def mech_state(params, temp_excess):
    """Stiffnesses, coil geometry, spring rate and damping at a temperature.

    Raises:
        CoilModelError: if bending stiffness does not exceed torsion
            stiffness or the coil-angle cosine falls outside (0, 1].
    """
    r = fiber_radius(params, temp_excess)
    r4 = r**4
    bend = params.axial_modulus_Pa * (math.pi / 4.0) * r4
    tors = params.shear_modulus_Pa * (math.pi / 2.0) * r4
    if bend <= tors:
        raise CoilModelError(f"bending stiffness {bend:.4g} <= torsion stiffness {tors:.4g}")
    q = 2.0 * math.pi * params.turns / params.fiber_length_m
    weight = params.external_mass_kg * params.gravity_mps2
    cos_phi = 1.0 - (q * bend * tors / (math.sqrt(bend) * weight) - 2.0 * tors) / (bend - tors)
    if not 0.0 < cos_phi <= 1.0:
        raise CoilModelError(f"coil-angle cosine {cos_phi:.6g} outside (0, 1] at dT={temp_excess}")
    length = params.fiber_length_m * cos_phi
    area = math.pi * r**2
    return TcamMechState(
        bending_stiffness_Nm2=bend,
        torsion_stiffness_Nm2=tors,
        coil_angle_rad=math.acos(cos_phi),
        length_m=length,
        spring_coeff_Npm=weight / length,
        damping_coeff_Nspm=params.viscosity_Pa_s * area / params.ambient_length_m,
    )


def linearization_coefficient(params, ref_temp_excess=DEFAULT_REF_TEMP_EXCESS):
    """Force per degree of the linearised muscle model (N/C).

    Equilibrium contraction at ``ref_temp_excess`` times the cold spring
    rate, divided by the reference temperature excess.
    """
    if not ref_temp_excess > 0:
        raise ValueError("ref_temp_excess must be > 0")
    weight = params.external_mass_kg * params.gravity_mps2
    k0 = mech_state(params, 0.0).spring_coeff_Npm
    k_ref = mech_state(params, ref_temp_excess).spring_coeff_Npm
    rest_length = weight / k0
    d_ref = rest_length - weight / k_ref
    return k0 * d_ref / ref_temp_excess


def tension(params, c_lin, temp_excess):
    """Muscle tension, linear in the temperature excess."""
    if c_lin < 0:
        raise ValueError("c_lin must be >= 0")
    return c_lin * np.asarray(temp_excess, dtype=float) if np.ndim(temp_excess) else c_lin * temp_excess


def contraction_response(params, c_lin, temp_history, dt, damping=None):
    """Contraction d(t) of the linearised mass-spring-damper muscle.

    Solves ``m d'' + b(T) d' + k0 d = c_lin T(t)`` from rest. The temperature
    is linearly interpolated between samples for the RK4 half steps.

    Args:
        temp_history: temperature excess sampled every ``dt`` seconds.
        damping: optional constant damping coefficient overriding b(T).
    """
    temps = np.asarray(temp_history, dtype=float)
    n = temps.size
    times = np.arange(n) * dt
    k0 = mech_state(params, 0.0).spring_coeff_Npm
    m = params.mass_kg
    visc_over_len = params.viscosity_Pa_s * math.pi / params.ambient_length_m
    r0, cte = params.fiber_radius0_m, params.cte_radial_perC

    def rhs(t, y):
        temp = np.interp(t, times, temps)
        if damping is None:
            b = visc_over_len * (r0 * (1.0 + cte * temp)) ** 2
        else:
            b = damping
        return np.array([y[1], (c_lin * temp - b * y[1] - k0 * y[0]) / m])

    out = np.zeros(n)
    y = np.zeros(2)
    for k in range(n - 1):
        y = rk4_step(rhs, times[k], y, dt)
        if not np.all(np.isfinite(y)):
            raise IntegrationDiverged(
                f"contraction diverged at t={times[k + 1]:.6g} s", last_state=(times[k], out[k])
            )
        out[k + 1] = y[0]
    return out
