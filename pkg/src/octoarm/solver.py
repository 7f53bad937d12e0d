"""Quasi-static equilibrium of the arm by under-relaxed configuration iteration.

Each iteration rebuilds the shape from the current strains, assembles the
loads on that shape, integrates the internal force and the total moment
about the origin backward from the free tip, inverts the constitutive law
for (nu, eta, mu) and integrates the volume constraint for beta. The new
strains are blended with the old ones until both the strain change and the
discrete equilibrium residual are below tolerance.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
import logging
import math

import numpy as np
from scipy.interpolate import CubicSpline

from .loads import FluidParams, TcamLayout, assemble_loads, cumulative_from_tip
from .rod import (
    MaterialParams,
    RodGeometry,
    StrainField,
    beta_rate,
    cross,
    det_deformation_gradient,
    integrate_beta,
    reconstruct,
    section_properties,
    tractions_from_strains,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverSettings:
    node_count: int = 201
    tol_strain: float = 1e-9
    tol_residual: float = 1e-8
    max_iterations: int = 500
    relaxation: float = 0.5
    tension_step_N: float = 0.5
    warm_start: bool = True

    def __post_init__(self):
        if not (self.tol_strain > 0 and self.tol_residual > 0):
            raise ValueError("solver tolerances must be > 0")
        if not 0 < self.relaxation <= 1:
            raise ValueError("solver.relaxation must lie in (0, 1]")
        if self.max_iterations < 1:
            raise ValueError("solver.max_iterations must be >= 1")
        if not self.tension_step_N > 0:
            raise ValueError("solver.tension_step_N must be > 0")


@dataclass(frozen=True)
class ArmScenario:
    """Everything the static solver needs besides the muscle tension."""

    geometry: RodGeometry = field(default_factory=RodGeometry)
    material: MaterialParams = field(default_factory=MaterialParams)
    layout: TcamLayout = field(default_factory=TcamLayout.single)
    fluid: FluidParams = field(default_factory=FluidParams)
    solver: SolverSettings = field(default_factory=SolverSettings)
    gravity: bool = True
    include_fluid: bool = True
    t12: float = 0.0

    def __post_init__(self):
        if self.geometry.node_count != self.solver.node_count:
            object.__setattr__(
                self, "geometry", replace(self.geometry, node_count=self.solver.node_count)
            )
        self.layout.validate(self.geometry)


@dataclass(frozen=True)
class Diagnostics:
    iterations: int
    final_residual: float
    final_strain_change: float
    converged: bool
    beta_residual: float = 0.0


@dataclass(frozen=True)
class Residual:
    """Scaled discrete residuals; entry ``k < N-1`` belongs to interval [s_k, s_k+1],
    the last entry is the free-end closure."""

    translation: np.ndarray
    rotation: np.ndarray
    beta: np.ndarray

    @property
    def max_equilibrium(self):
        return float(max(np.abs(self.translation).max(), np.abs(self.rotation).max()))


@dataclass(frozen=True)
class EquilibriumSolution:
    tension_N: float
    strain_field: StrainField
    configuration: object
    tractions: object
    loads: object
    diagnostics: Diagnostics
    det_f: np.ndarray

    @property
    def tip_position_m(self):
        return self.configuration.position[-1].copy()

    @property
    def tip_height_m(self):
        return float(self.configuration.position[-1, 1])

    @property
    def tilt_deg_at_L(self):
        return float(np.degrees(self.configuration.tilt[-1]))

    @property
    def theta_deg_at_L(self):
        return float(np.degrees(self.configuration.theta[-1]))

    @property
    def tip_summary(self):
        x, y = self.tip_position_m
        return {
            "tip_position_m": [float(x), float(y)],
            "tip_height_m": float(y),
            "tilt_deg_at_L": self.tilt_deg_at_L,
            "theta_deg_at_L": self.theta_deg_at_L,
        }


@dataclass(frozen=True)
class SweepResult:
    tensions: tuple
    solutions: tuple
    scenario: ArmScenario
    partial: bool = False

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(zip(self.tensions, self.solutions))

    @property
    def converged(self):
        return not self.partial and all(sol.diagnostics.converged for sol in self.solutions)

    def tip_heights(self):
        return np.array([sol.tip_height_m for sol in self.solutions])


def _scenario_with_tension(scenario, t11):
    layout = scenario.layout.with_tensions(t11, scenario.t12)
    return replace(scenario, layout=layout)


def _internal_resultants(config, loads, h):
    """Contact force n(s) and total moment about the origin, integrated from the tip."""
    point_force_beyond = np.cumsum(loads.point_force[::-1], axis=0)[::-1]
    point_moment_beyond = np.cumsum(loads.point_moment[::-1])[::-1]
    n = point_force_beyond + cumulative_from_tip(loads.distributed_force, h)
    total_moment = point_moment_beyond + cumulative_from_tip(loads.moment_density, h)
    return n, total_moment


def _contact_from_strains(geom, mat, strains, config):
    tr = tractions_from_strains(mat, strains, geom)
    n_c = tr.area[:, None] * (tr.normal[:, None] * config.a + tr.shear[:, None] * config.b)
    m_c = tr.bending * tr.second_moment
    return n_c, m_c


def _box_residual(resultant, density, point, h):
    """Discrete ``X_s + density`` per interval, consistent with trapezoidal integration.

    Point loads at interior nodes enter as jumps; the last entry is the free
    end closure ``X(L) - point(L)`` divided by ``h``.
    """
    res = np.empty(resultant.shape)
    res[:-1] = (resultant[1:] - resultant[:-1] + point[:-1]) / h + 0.5 * (density[1:] + density[:-1])
    res[-1] = (resultant[-1] - point[-1]) / h
    return res


def _beta_residual(geom, strains):
    s = geom.s
    nu_i, mu_i = CubicSpline(s, strains.nu), CubicSpline(s, strains.mu)
    rate = beta_rate(
        strains.nu, nu_i(s, 1), strains.mu, mu_i(s, 1), strains.beta, geom.radius, geom.radius_slope
    )
    out = np.zeros(len(strains))
    out[:-1] = (np.diff(strains.beta) / geom.spacing - 0.5 * (rate[1:] + rate[:-1])) * geom.length_m
    return out


def _scales(scenario):
    g, e = scenario.geometry, scenario.material.young_modulus_Pa
    area_ref, inertia_ref = section_properties(g, 1.0)
    area_ref, inertia_ref = float(area_ref[0]), float(inertia_ref[0])
    return g.length_m / (e * area_ref), g.length_m**2 / (e * inertia_ref)


def _evaluate(scenario, strains):
    g, mat = scenario.geometry, scenario.material
    config = reconstruct(g, strains)
    loads = assemble_loads(
        config, strains, g, mat, scenario.layout, scenario.fluid, scenario.gravity, scenario.include_fluid
    )
    return config, loads


def _residual_from(scenario, strains, config, loads):
    g, h = scenario.geometry, scenario.geometry.spacing
    force_scale, moment_scale = _scales(scenario)
    n_c, m_c = _contact_from_strains(g, scenario.material, strains, config)
    total_c = m_c + cross(config.position, n_c)
    trans = _box_residual(n_c, loads.distributed_force, loads.point_force, h) * force_scale
    rot = _box_residual(total_c, loads.moment_density, loads.point_moment, h) * moment_scale
    return Residual(trans, rot, _beta_residual(g, strains))


def residual(strains, scenario, tension_T11=None):
    """Scaled equilibrium and volume-constraint residuals of a strain field.

    Translation is scaled by ``L / (E A_ref)`` and rotation by
    ``L^2 / (E J_ref)`` with base-section reference area and inertia.
    """
    if tension_T11 is not None:
        scenario = _scenario_with_tension(scenario, tension_T11)
    config, loads = _evaluate(scenario, strains)
    return _residual_from(scenario, strains, config, loads)


def _update(scenario, strains, config, loads):
    g, mat = scenario.geometry, scenario.material
    n, total_moment = _internal_resultants(config, loads, g.spacing)
    m_c = total_moment - cross(config.position, n)
    area, inertia = section_properties(g, strains.beta)
    c1, c2, c3 = mat.stiffness
    normal = np.einsum("ij,ij->i", n, config.a) / area
    shear = np.einsum("ij,ij->i", n, config.b) / area
    nu = 1.0 + normal / (2.0 * c1)
    eta = shear / (2.0 * c2)
    mu = (m_c / inertia) / (2.0 * c3)
    beta = integrate_beta(g, nu, mu)
    return StrainField(nu, eta, mu, beta)


def solve_static(scenario, tension_T11, initial_guess=None):
    """Equilibrium strain field for muscle tension ``tension_T11`` (N).

    Non-convergence within ``max_iterations`` returns the best iterate with
    ``diagnostics.converged = False``. A singular volume constraint raises
    :class:`~octoarm.errors.SingularConstraintError`.
    """
    scen = _scenario_with_tension(scenario, tension_T11)
    st = scen.solver
    g = scen.geometry
    strains = initial_guess if initial_guess is not None else StrainField.reference(g.node_count)
    if len(strains) != g.node_count:
        raise ValueError("initial guess does not match the grid")

    best = None
    change = math.inf
    for it in range(1, st.max_iterations + 1):
        config, loads = _evaluate(scen, strains)
        res = _residual_from(scen, strains, config, loads)
        res_max = res.max_equilibrium
        update = _update(scen, strains, config, loads)
        change = float(np.abs(update.stacked(g.length_m) - strains.stacked(g.length_m)).max())
        if best is None or res_max < best[0]:
            best = (res_max, change, it, strains, config, loads, res)
        if change < st.tol_strain and res_max < st.tol_residual:
            break
        strains = strains.blend(update, st.relaxation)
    else:
        res_max, change, it, strains, config, loads, res = best
        log.warning("no convergence at T11=%g N after %d iterations (residual %.3g)",
                    tension_T11, st.max_iterations, res_max)
        return _package(scen, tension_T11, strains, config, loads, res, it, change, False)
    return _package(scen, tension_T11, strains, config, loads, res, it, change, True)


def _package(scen, t11, strains, config, loads, res, iterations, change, converged):
    diag = Diagnostics(
        iterations=iterations,
        final_residual=res.max_equilibrium,
        final_strain_change=change,
        converged=converged,
        beta_residual=float(np.abs(res.beta).max()),
    )
    return EquilibriumSolution(
        tension_N=float(t11),
        strain_field=strains,
        configuration=config,
        tractions=tractions_from_strains(scen.material, strains, scen.geometry),
        loads=loads,
        diagnostics=diag,
        det_f=det_deformation_gradient(scen.geometry, strains),
    )


def tension_steps(low, high, step):
    if not step > 0:
        raise ValueError("step must be > 0")
    if high < low:
        raise ValueError("tension range is reversed")
    count = int(math.floor((high - low) / step + 1e-9)) + 1
    return tuple(float(low + k * step) for k in range(count))


def tension_sweep(scenario, t_range=(0.0, 20.0), step=None, strict=False, max_workers=None):
    """Solve a sequence of increasing tensions.

    With ``warm_start`` each step starts from the previous solution and the
    sweep is sequential. Without it every step starts from the reference
    state and steps may run on ``max_workers`` threads; the results are
    identical to the sequential cold-start run.

    Args:
        strict: stop at the first non-converged step and mark the result
            partial.
    """
    step = scenario.solver.tension_step_N if step is None else step
    tensions = tension_steps(t_range[0], t_range[1], step)
    solutions = []
    partial = False
    if scenario.solver.warm_start:
        guess = None
        for t in tensions:
            sol = solve_static(scenario, t, guess)
            solutions.append(sol)
            if not sol.diagnostics.converged:
                partial = True
                if strict:
                    break
            guess = sol.strain_field
    else:
        with ThreadPoolExecutor(max_workers=max_workers or 1) as pool:
            for sol in pool.map(lambda t: solve_static(scenario, t), tensions):
                solutions.append(sol)
                if not sol.diagnostics.converged:
                    partial = True
                    if strict:
                        break
    return SweepResult(tuple(tensions[: len(solutions)]), tuple(solutions), scenario, partial)
