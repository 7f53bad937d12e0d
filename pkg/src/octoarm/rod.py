"""Planar extended Cosserat rod: geometry, kinematics and constitutive law.

Strain field conventions (per grid node):

* ``nu``, ``eta``: stretch and shear of the centerline in the director
  frame, ``r_s = nu a + eta b``.
* ``mu``: bending strain, ``theta_s = mu`` (1/m).
* ``beta``: in-plane cross-section stretch along ``b``; a material point at
  section coordinate ``X2`` sits at ``r + beta X2 b``.

The reference (stress-free) state is ``nu = beta = 1``, ``eta = mu = 0``.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ModelDomainError, SingularConstraintError

DENOM_FLOOR = 1e-9


@dataclass(frozen=True)
class RodGeometry:
    """Truncated-cone reference arm on a uniform grid of ``node_count`` nodes."""

    length_m: float = 0.418
    r_max_m: float = 0.015
    r_min_m: float = 0.004
    node_count: int = 201

    def __post_init__(self):
        if not self.length_m > 0:
            raise ModelDomainError("rod.length_m must be > 0")
        if not self.r_max_m >= self.r_min_m > 0:
            raise ModelDomainError("rod radii must satisfy r_max_m >= r_min_m > 0")
        if int(self.node_count) != self.node_count or self.node_count < 3:
            raise ModelDomainError("rod.node_count must be an integer >= 3")

    @property
    def s(self):
        return np.linspace(0.0, self.length_m, self.node_count)

    @property
    def spacing(self):
        return self.length_m / (self.node_count - 1)

    @property
    def radius_slope(self):
        return (self.r_min_m - self.r_max_m) / self.length_m

    @property
    def radius(self):
        return radius_at(self, self.s)


@dataclass(frozen=True)
class MaterialParams:
    """Isotropic hyperelastic arm material (silicone rubber by default)."""

    young_modulus_Pa: float = 10e6
    poisson_ratio: float = 0.5
    density_kgpm3: float = 1100.0
    gravity_mps2: float = 9.81

    def __post_init__(self):
        if not self.young_modulus_Pa > 0:
            raise ModelDomainError("rod.young_modulus_Pa must be > 0")
        if not 0.0 <= self.poisson_ratio <= 0.5:
            raise ModelDomainError("rod.poisson_ratio must lie in [0, 0.5]")
        if not self.density_kgpm3 > 0:
            raise ModelDomainError("rod.density_kgpm3 must be > 0")
        if not self.gravity_mps2 >= 0:
            raise ModelDomainError("rod.gravity_mps2 must be >= 0")

    @property
    def shear_modulus_Pa(self):
        return self.young_modulus_Pa / (2.0 * (1.0 + self.poisson_ratio))

    @property
    def stiffness(self):
        """Energy coefficients (C1, C2, C3) for stretch, shear and bending."""
        return self.young_modulus_Pa, self.shear_modulus_Pa, self.young_modulus_Pa


def _frozen(x):
    arr = np.array(x, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StrainField:
    nu: np.ndarray
    eta: np.ndarray
    mu: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        for name in ("nu", "eta", "mu", "beta"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        n = self.nu.shape
        if not (self.eta.shape == self.mu.shape == self.beta.shape == n) or len(n) != 1:
            raise ValueError("strain components must be 1-D arrays of equal length")
        if np.any(self.nu <= 0) or np.any(self.beta <= 0):
            raise ModelDomainError("nu and beta must be strictly positive at every node")

    @classmethod
    def reference(cls, node_count):
        ones, zeros = np.ones(node_count), np.zeros(node_count)
        return cls(ones, zeros, zeros, ones)

    def __len__(self):
        return self.nu.size

    def stacked(self, length_scale=1.0):
        """Rows (nu, eta, mu * length_scale, beta); used for change norms."""
        return np.vstack([self.nu, self.eta, self.mu * length_scale, self.beta])

    def blend(self, other, weight):
        """``weight * other + (1 - weight) * self``."""
        w = weight
        return StrainField(
            w * other.nu + (1 - w) * self.nu,
            w * other.eta + (1 - w) * self.eta,
            w * other.mu + (1 - w) * self.mu,
            w * other.beta + (1 - w) * self.beta,
        )


@dataclass(frozen=True)
class Configuration:
    """Deformed shape reconstructed from a strain field.

    ``tangent`` is ``r_s = nu a + eta b`` and ``alpha`` its orientation;
    ``tilt = alpha - theta`` is the angle between the centerline tangent and
    the section director ``a``.
    """

    s: np.ndarray
    position: np.ndarray
    theta: np.ndarray
    body_position: np.ndarray
    tangent: np.ndarray
    alpha: np.ndarray

    @property
    def a(self):
        return np.column_stack([np.cos(self.theta), np.sin(self.theta)])

    @property
    def b(self):
        return np.column_stack([-np.sin(self.theta), np.cos(self.theta)])

    @property
    def tilt(self):
        return self.alpha - self.theta

    @property
    def tilt_deg(self):
        return np.degrees(self.tilt)

    @property
    def unit_tangent(self):
        return self.tangent / np.linalg.norm(self.tangent, axis=1)[:, None]


@dataclass(frozen=True)
class Tractions:
    normal: np.ndarray
    shear: np.ndarray
    bending: np.ndarray
    area: np.ndarray
    second_moment: np.ndarray


def radius_at(geom, s):
    """Reference section radius, affine from ``r_max_m`` at the base to ``r_min_m`` at the tip."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < -1e-12 * geom.length_m) or np.any(s_arr > geom.length_m * (1 + 1e-12)):
        raise ValueError("s outside [0, L]")
    r = geom.radius_slope * s_arr + geom.r_max_m
    return r if np.ndim(r) else float(r)


def cross(u, v):
    """Scalar (k-component) cross product of stacked 2-vectors."""
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def _midpoints(s):
    return 0.5 * (s[:-1] + s[1:])


def reconstruct(geom, strains):
    """Integrate the centerline and director angle from the clamped base.

    ``theta`` is the exact antiderivative of the cubic-spline interpolant of
    ``mu``. The centerline advances one Simpson step per grid interval using
    the tangent ``nu a + eta b`` at the interval ends and midpoint, which is
    fourth-order accurate and equivalent to integrating the body-frame
    equations for (r^a, r^b). The base is clamped: r(0) = 0, theta(0) = 0.
    """
    s = geom.s
    h = geom.spacing
    mid = _midpoints(s)
    theta_fn = CubicSpline(s, strains.mu).antiderivative()
    theta = theta_fn(s) - theta_fn(0.0)
    theta_mid = theta_fn(mid) - theta_fn(0.0)
    nu_mid = CubicSpline(s, strains.nu)(mid)
    eta_mid = CubicSpline(s, strains.eta)(mid)

    def tangent_of(nu, eta, th):
        c, sn = np.cos(th), np.sin(th)
        return np.column_stack([nu * c - eta * sn, nu * sn + eta * c])

    tangent = tangent_of(strains.nu, strains.eta, theta)
    t_mid = tangent_of(nu_mid, eta_mid, theta_mid)
    steps = (h / 6.0) * (tangent[:-1] + 4.0 * t_mid + tangent[1:])
    position = np.zeros((s.size, 2))
    position[1:] = np.cumsum(steps, axis=0)
    c, sn = np.cos(theta), np.sin(theta)
    body = np.column_stack(
        [position[:, 0] * c + position[:, 1] * sn, -position[:, 0] * sn + position[:, 1] * c]
    )
    alpha = theta + np.arctan2(strains.eta, strains.nu)
    return Configuration(
        s=s, position=position, theta=theta, body_position=body, tangent=tangent, alpha=alpha
    )


def section_properties(geom, beta):
    rad = beta * geom.radius
    return math.pi * rad**2, math.pi * rad**4 / 4.0


def tractions_from_strains(mat, strains, geom):
    c1, c2, c3 = mat.stiffness
    area, inertia = section_properties(geom, strains.beta)
    return Tractions(
        normal=2.0 * c1 * (strains.nu - 1.0),
        shear=2.0 * c2 * strains.eta,
        bending=2.0 * c3 * strains.mu,
        area=area,
        second_moment=inertia,
    )


def strains_from_tractions(mat, tr):
    """Invert the linear constitutive law; returns ``(nu, eta, mu)``."""
    c1, c2, c3 = mat.stiffness
    return (
        1.0 + np.asarray(tr.normal) / (2.0 * c1),
        np.asarray(tr.shear) / (2.0 * c2),
        np.asarray(tr.bending) / (2.0 * c3),
    )


def strain_energy(mat, strains):
    c1, c2, c3 = mat.stiffness
    return c1 * (strains.nu - 1.0) ** 2 + c2 * strains.eta**2 + c3 * strains.mu**2


def deformation_gradient(geom, strains):
    """Body-frame deformation gradient at the section surface ``X2 = radius``.

    Column 1 is dx/ds at fixed X2 and column 2 is dx/dX2 = beta b, both in
    (a, b) components. The along-s derivative of ``beta X2`` uses second
    order centered differences; it only enters the b-component of column 1.

    Returns:
        array of shape (N, 2, 2).
    """
    x2 = geom.radius
    bx = strains.beta * x2
    dbx = np.gradient(strains.beta, geom.spacing, edge_order=2) * x2
    F = np.zeros((len(strains), 2, 2))
    F[:, 0, 0] = strains.nu - bx * strains.mu
    F[:, 1, 0] = strains.eta + dbx
    F[:, 1, 1] = strains.beta
    return F


def det_deformation_gradient(geom, strains, s_index=None):
    det = np.linalg.det(deformation_gradient(geom, strains))
    return det if s_index is None else float(det[s_index])


def beta_rate(nu, nu_s, mu, mu_s, beta, x2, x2_s, floor=DENOM_FLOOR):
    """Right-hand side of the volume-preservation ODE for ``beta``.

    Raises:
        SingularConstraintError: where ``|nu - 2 beta X2 mu| <= floor``.
    """
    denom = nu - 2.0 * beta * x2 * mu
    bad = np.abs(denom) <= floor
    if np.any(bad):
        node = int(np.flatnonzero(np.atleast_1d(bad))[0])
        raise SingularConstraintError(f"volume constraint singular (node {node})", node=node)
    return -beta * (nu_s - beta * x2_s * mu - beta * x2 * mu_s) / denom


def volume_preserving_beta(nu, mu, x2):
    """Closed-form root of ``beta (nu - beta X2 mu) = 1`` that tends to 1/nu as mu -> 0."""
    nu, mu, x2 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (nu, mu, x2)))
    disc = nu**2 - 4.0 * x2 * mu
    if np.any(disc <= 0):
        node = int(np.flatnonzero(np.atleast_1d(disc <= 0))[0])
        raise SingularConstraintError(f"no volume-preserving beta (node {node})", node=node)
    out = 2.0 / (nu + np.sqrt(disc))
    return out if out.ndim else float(out)


def integrate_beta(geom, nu, mu, beta0=None):
    """Integrate the volume-preservation ODE from the base with RK4.

    ``beta0`` defaults to the value that makes det F = 1 at s = 0; the ODE
    then keeps det F = 1 along the arm up to integration error. ``nu`` and
    ``mu`` (and their s-derivatives) between nodes come from cubic splines.
    """
    s = geom.s
    h = geom.spacing
    n = s.size
    # nodes at even, interval midpoints at odd positions
    fine = np.empty(2 * n - 1)
    fine[0::2] = s
    fine[1::2] = _midpoints(s)
    nu_i, mu_i = CubicSpline(s, nu), CubicSpline(s, mu)
    nu_f, nu_sf = nu_i(fine), nu_i(fine, 1)
    mu_f, mu_sf = mu_i(fine), mu_i(fine, 1)
    x2_f = geom.radius_slope * fine + geom.r_max_m
    x2_s = geom.radius_slope
    if beta0 is None:
        beta0 = volume_preserving_beta(nu[0], mu[0], geom.r_max_m)

    coeffs = list(zip(nu_f.tolist(), nu_sf.tolist(), mu_f.tolist(), mu_sf.tolist(), x2_f.tolist()))

    def rate(j, y):
        nv, nvs, m, ms, x2 = coeffs[j]
        denom = nv - 2.0 * y * x2 * m
        if abs(denom) <= DENOM_FLOOR:
            node = (j + 1) // 2
            raise SingularConstraintError(f"volume constraint singular (node {node})", node=node)
        return -y * (nvs - y * x2_s * m - y * x2 * ms) / denom

    out = np.empty(n)
    y = float(beta0)
    out[0] = y
    for k in range(n - 1):
        j = 2 * k
        k1 = rate(j, y)
        k2 = rate(j + 1, y + 0.5 * h * k1)
        k3 = rate(j + 1, y + 0.5 * h * k2)
        k4 = rate(j + 2, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not math.isfinite(y):
            raise SingularConstraintError(f"beta diverged (node {k + 1})", node=k + 1)
        out[k + 1] = y
    return out
