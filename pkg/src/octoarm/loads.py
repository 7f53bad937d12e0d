"""External loads on the arm: muscles, water and self-weight.

All force densities are per unit *reference* length and expressed in the
global frame {e1, e2}. Moments are scalars about k taken about the global
origin. Every distributed load is returned with its point of application
so the solver can form moment densities ``p x f`` consistently.
"""

from dataclasses import dataclass
import enum
import math

import numpy as np

from .errors import ModelDomainError
from .rod import cross, radius_at


@dataclass(frozen=True)
class TcamSegment:
    """One independently actuated arm segment and its two muscles.

    Muscle 1 runs on the +b side of the centerline, muscle 2 on the -b side.
    Offsets taper linearly from ``a_m`` at the arm base to ``b_m`` at the
    segment end.
    """

    length_m: float
    a_m: float = 0.012
    b_m: float = 0.001
    tension1_N: float = 0.0
    tension2_N: float = 0.0

    def __post_init__(self):
        if not self.length_m > 0:
            raise ModelDomainError("layout segment length must be > 0")
        if not self.a_m > self.b_m > 0:
            raise ModelDomainError("layout offsets must satisfy a > b > 0")
        if self.tension1_N < 0 or self.tension2_N < 0:
            raise ModelDomainError("muscle tensions must be >= 0")


@dataclass(frozen=True)
class TcamLayout:
    segments: tuple

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise ModelDomainError("layout needs at least one segment")

    @classmethod
    def single(cls, length_m=0.418, a_m=0.012, b_m=0.001, t11=0.0, t12=0.0):
        return cls((TcamSegment(length_m, a_m, b_m, t11, t12),))

    @property
    def total_length_m(self):
        return sum(seg.length_m for seg in self.segments)

    def segment_end(self, i):
        """Arc length at which segment ``i`` (1-based) ends."""
        return sum(seg.length_m for seg in self.segments[:i])

    def tension(self, i, j):
        seg = self.segments[i - 1]
        return seg.tension1_N if j == 1 else seg.tension2_N

    def with_tensions(self, t11, t12=0.0, segment=1):
        segs = list(self.segments)
        old = segs[segment - 1]
        segs[segment - 1] = TcamSegment(old.length_m, old.a_m, old.b_m, t11, t12)
        return TcamLayout(tuple(segs))

    def validate(self, geom):
        if not math.isclose(self.total_length_m, geom.length_m, rel_tol=1e-9):
            raise ModelDomainError(
                f"layout segment lengths sum to {self.total_length_m}, arm length is {geom.length_m}"
            )
        for i in range(1, len(self.segments) + 1):
            s = np.linspace(0.0, self.segment_end(i), 101)
            if np.any(np.abs(tcam_offset(self, i, 1, s)) > radius_at(geom, s) + 1e-15):
                raise ModelDomainError(f"muscles of segment {i} leave the arm cross-section")


class HydrostaticMode(str, enum.Enum):
    CANCEL = "cancel"
    BUOYANT = "buoyant"


@dataclass(frozen=True)
class FluidParams:
    """Steady free stream ``free_stream_mps * e1`` of water."""

    water_density_kgpm3: float = 998.0
    dynamic_viscosity_Pas: float = 1.002e-3
    free_stream_mps: float = 0.2
    boundary_layer_m: float = 0.05
    hydrostatic_mode: HydrostaticMode = HydrostaticMode.CANCEL
    reference_depth_m: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "hydrostatic_mode", HydrostaticMode(self.hydrostatic_mode))
        for name in ("water_density_kgpm3", "dynamic_viscosity_Pas", "boundary_layer_m"):
            if not getattr(self, name) > 0:
                raise ModelDomainError(f"fluid.{name} must be > 0")
        if self.free_stream_mps < 0:
            raise ModelDomainError("fluid.free_stream_mps must be >= 0")
        if self.reference_depth_m < 0:
            raise ModelDomainError("fluid.reference_depth_m must be >= 0")

    @property
    def stream(self):
        return np.array([self.free_stream_mps, 0.0])


@dataclass(frozen=True)
class TcamCurve:
    """Muscle path ``r + y beta b`` sampled on the rod grid up to ``end``."""

    end: int
    position: np.ndarray
    tangent: np.ndarray
    tangent_s: np.ndarray


@dataclass(frozen=True)
class FluidForces:
    viscous: np.ndarray
    ventral_tangential: np.ndarray
    ventral_normal: np.ndarray
    dorsal_normal: np.ndarray
    buoyancy: np.ndarray

    @property
    def total(self):
        return (
            self.viscous
            + self.ventral_tangential
            + self.ventral_normal
            + self.dorsal_normal
            + self.buoyancy
        )


@dataclass(frozen=True)
class LoadField:
    """Loads assembled on the rod grid.

    Attributes:
        distributed_force: (N, 2) total force density.
        moment_density: (N,) sum of ``p x f`` over distributed loads applied
            at points ``p``.
        point_force: (N, 2) concentrated forces placed on nodes.
        point_moment: (N,) ``p x F`` of the concentrated forces.
    """

    distributed_force: np.ndarray
    moment_density: np.ndarray
    point_force: np.ndarray
    point_moment: np.ndarray

    def __add__(self, other):
        return LoadField(
            self.distributed_force + other.distributed_force,
            self.moment_density + other.moment_density,
            self.point_force + other.point_force,
            self.point_moment + other.point_moment,
        )

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros((n, 2)), np.zeros(n), np.zeros((n, 2)), np.zeros(n))

    @property
    def tip_concentrated_force(self):
        return self.point_force


def tcam_offset(layout, i, j, s):
    """Signed distance of muscle ``j`` of segment ``i`` from the reference centerline."""
    seg = layout.segments[i - 1]
    span = layout.segment_end(i)
    sign = 1.0 if j == 1 else -1.0
    y = sign * ((seg.b_m - seg.a_m) / span * np.asarray(s, dtype=float) + seg.a_m)
    return y if np.ndim(y) else float(y)


def _segment_end_index(geom, layout, i):
    end = layout.segment_end(i) / geom.spacing
    idx = int(round(end))
    if abs(end - idx) > 1e-6:
        raise ModelDomainError(f"segment {i} does not end on a grid node")
    return idx


def tcam_curve(config, strains, geom, layout, i, j):
    """Muscle position, tangent and tangent derivative by centered differences."""
    end = _segment_end_index(geom, layout, i)
    sl = slice(0, end + 1)
    y = tcam_offset(layout, i, j, config.s[sl])
    pos = config.position[sl] + (y * strains.beta[sl])[:, None] * config.b[sl]
    h = geom.spacing
    tan = np.gradient(pos, h, axis=0, edge_order=2)
    tan_s = np.gradient(tan, h, axis=0, edge_order=2)
    return TcamCurve(end=end, position=pos, tangent=tan, tangent_s=tan_s)


def tcam_concentrated_force(tangent_end, tension_N):
    if tension_N < 0:
        raise ValueError("tension must be >= 0")
    return -tension_N * np.asarray(tangent_end, dtype=float)


def cumulative_from_tip(values, h):
    """Trapezoidal ``int_s^L values`` evaluated at every node (zero at the last)."""
    values = np.asarray(values, dtype=float)
    out = np.zeros_like(values)
    pieces = 0.5 * h * (values[1:] + values[:-1])
    out[:-1] = np.cumsum(pieces[::-1], axis=0)[::-1]
    return out


def tcam_distributed(curve, tension_N, h):
    """Distributed muscle force ``T t^c_s`` and its moment about the origin.

    Returns:
        ``(force, moment)`` on the muscle span: force (n, 2) and the integral
        of ``r^c x T t^c_s`` from each node to the segment end.
    """
    if tension_N < 0:
        raise ValueError("tension must be >= 0")
    force = tension_N * curve.tangent_s
    moment = cumulative_from_tip(cross(curve.position, force), h)
    return force, moment


def fluid_force_densities(unit_tangent, half_width, stream, fluid, gravity_mps2=9.81):
    """Viscous and control-volume force densities for given local geometry.

    ``half_width`` is the deformed section radius ``beta X2`` and
    ``u_n = k x u_t``. The ventral face is the one on the ``-u_n`` side; the
    momentum terms act only where the free stream enters it, i.e. where
    ``v . u_n > 0``. Face pressures are equal and opposite (a nominal
    depth pressure times the projected width), so they cancel node-wise.

    Returns:
        ``(viscous, ventral_tangential, ventral_normal, dorsal_normal)``,
        each of shape (N, 2).
    """
    ut = np.asarray(unit_tangent, dtype=float)
    un = np.column_stack([-ut[:, 1], ut[:, 0]])
    v_t = ut @ stream
    v_n = un @ stream
    v_n = np.where(v_n > 0.0, v_n, 0.0)
    v_t_in = np.where(v_n > 0.0, v_t, 0.0)
    rho, mu_v, h_inf = fluid.water_density_kgpm3, fluid.dynamic_viscosity_Pas, fluid.boundary_layer_m

    viscous = (-2.0 * math.pi * half_width * mu_v * v_t / h_inf)[:, None] * ut
    tangential = (math.pi * rho * half_width * (v_n**2 + 2.0 * v_t_in * v_n))[:, None] * ut
    pressure = (rho * gravity_mps2 * fluid.reference_depth_m * 2.0 * half_width)[:, None]
    ventral_normal = (pressure + (math.pi * rho * half_width * v_n**2)[:, None]) * un
    dorsal_normal = -pressure * un
    return viscous, tangential, ventral_normal, dorsal_normal


def fluid_forces(config, strains, geom, fluid, gravity_mps2=9.81):
    """Fluid force densities at every node of a configuration."""
    half_width = strains.beta * geom.radius
    viscous, tangential, ventral, dorsal = fluid_force_densities(
        config.unit_tangent, half_width, fluid.stream, fluid, gravity_mps2
    )
    buoyancy = np.zeros_like(viscous)
    if fluid.hydrostatic_mode is HydrostaticMode.BUOYANT:
        buoyancy[:, 1] = fluid.water_density_kgpm3 * gravity_mps2 * math.pi * strains.nu * half_width**2
    return FluidForces(viscous, tangential, ventral, dorsal, buoyancy)


def weight(config, strains, geom, mat):
    """Weight of the arm beyond each node and its density.

    Returns:
        ``(W, w)``: W (N, 2) is the weight of the part [s, L]; w (N, 2) the
        weight per unit reference length.
    """
    w = np.zeros((len(strains), 2))
    w[:, 1] = -math.pi * mat.density_kgpm3 * mat.gravity_mps2 * strains.nu * (strains.beta * geom.radius) ** 2
    return cumulative_from_tip(w, geom.spacing), w


def assemble_loads(config, strains, geom, mat, layout, fluid, gravity=True, include_fluid=True):
    """Sum muscle, fluid and weight loads into a :class:`LoadField`.

    Fluid forces and weight act on the centerline; distributed muscle forces
    act on the muscle path; each active muscle adds ``-T t^c`` at the node
    where its segment ends, applied at the muscle attachment point.
    """
    n = len(strains)
    h = geom.spacing
    out = LoadField.zeros(n)
    r = config.position
    for i in range(1, len(layout.segments) + 1):
        for j in (1, 2):
            tension_N = layout.tension(i, j)
            if tension_N == 0.0:
                continue
            curve = tcam_curve(config, strains, geom, layout, i, j)
            sl = slice(0, curve.end + 1)
            force = tension_N * curve.tangent_s
            tip = tcam_concentrated_force(curve.tangent[-1], tension_N)
            dist = np.zeros((n, 2))
            dist[sl] = force
            mom = np.zeros(n)
            mom[sl] = cross(curve.position, force)
            pf = np.zeros((n, 2))
            pf[curve.end] = tip
            pm = np.zeros(n)
            pm[curve.end] = cross(curve.position[-1], tip)
            out = out + LoadField(dist, mom, pf, pm)
    if include_fluid:
        f = fluid_forces(config, strains, geom, fluid, mat.gravity_mps2).total
        out = out + LoadField(f, cross(r, f), np.zeros((n, 2)), np.zeros(n))
    if gravity:
        _, w = weight(config, strains, geom, mat)
        out = out + LoadField(w, cross(r, w), np.zeros((n, 2)), np.zeros(n))
    return out
