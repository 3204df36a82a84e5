"""Toroidal-poloidal (w, u, v) and Moon-Spencer toroidal (tau, theta, phi) coordinates.

Toroidal-poloidal chart::

    x = (R + w cos u) cos v
    y = s_y (R + w cos u) sin v
    z = s_z w sin u

with scale factors h_w = 1, h_u = w, h_v = R + w cos u. The poloidal angle u
is reduced to [0, 2pi) on construction; the toroidal angle v is kept as given
because wavefunctions carry a half-integer phase in v (period 4pi).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateAxis

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TorusGeometry:
    """Major radius, chart orientation signs and physical constants.

    Defaults follow the figures: R = 1, m* = 1/2, hbar = 1. The inverse map
    uses s_z = -1 by default; s_z = 1, s_y = -1 gives a right-handed frame.
    """

    R: float = 1.0
    s_y: int = 1
    s_z: int = -1
    hbar: float = 1.0
    mass: float = 0.5

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError(f"major radius must be positive, got {self.R}")
        if self.s_y not in (1, -1) or self.s_z not in (1, -1):
            raise ValueError("s_y and s_z must be +1 or -1")
        if not (self.hbar > 0 and self.mass > 0):
            raise ValueError("hbar and mass must be positive")

    def energy(self, k: float) -> float:
        """E = hbar^2 k^2 / (2 m*)."""
        return self.hbar**2 * k * k / (2.0 * self.mass)

    def wavenumber(self, energy: float) -> float:
        return math.sqrt(2.0 * self.mass * energy) / self.hbar


@dataclass(frozen=True)
class ToroidalPoint:
    w: float
    u: float
    v: float

    def __post_init__(self):
        if not self.w >= 0:
            raise ValueError(f"w must be >= 0, got {self.w}")
        object.__setattr__(self, "u", float(self.u) % TWO_PI)
        object.__setattr__(self, "v", float(self.v))


@dataclass(frozen=True)
class MoonSpencerPoint:
    tau: float
    theta: float
    phi: float

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")


@dataclass(frozen=True)
class CartesianPoint:
    x: float
    y: float
    z: float

    def as_array(self):
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class ScaleFactors:
    h_w: float
    h_u: float
    h_v: float
    sqrt_g: float

    @property
    def volume_weight(self) -> float:
        """Weight of dw du dv in dV."""
        return self.sqrt_g

    @property
    def surface_weight(self) -> float:
        """Weight of du dv in dS on the torus of constant w."""
        return self.h_u * self.h_v


# ---------------------------------------------------------------------------
# array-level helpers (used by grids and residual harnesses)


def chart_factor(g: TorusGeometry, w, u):
    """R + w cos u, the cylindrical radius of a toroidal point."""
    return g.R + w * np.cos(u)


def cartesian_arrays(g: TorusGeometry, w, u, v):
    rho = chart_factor(g, w, u)
    return rho * np.cos(v), g.s_y * rho * np.sin(v), g.s_z * w * np.sin(u)


def sqrt_g(g: TorusGeometry, w, u):
    """Metric determinant root w (R + w cos u); equals the volume and surface weights."""
    return w * chart_factor(g, w, u)


volume_element = sqrt_g
surface_element = sqrt_g


# ---------------------------------------------------------------------------
# point API


def to_cartesian(g: TorusGeometry, p: ToroidalPoint) -> CartesianPoint:
    x, y, z = cartesian_arrays(g, p.w, p.u, p.v)
    return CartesianPoint(float(x), float(y), float(z))


def from_cartesian(g: TorusGeometry, c: CartesianPoint) -> ToroidalPoint:
    """Principal toroidal-poloidal representation (w measured from the ring rho = R).

    Raises DegenerateAxis on the z-axis, where v is undefined.
    """
    rho = math.hypot(c.x, c.y)
    if rho == 0.0:
        raise DegenerateAxis("point lies on the excised z-axis")
    d = rho - g.R
    w = math.hypot(d, c.z)
    u = math.atan2(g.s_z * c.z, d) if w > 0 else 0.0
    v = math.atan2(g.s_y * c.y, c.x)
    return ToroidalPoint(w, u % TWO_PI, v % TWO_PI)


def antipodal(g: TorusGeometry, p: ToroidalPoint) -> ToroidalPoint:
    """Second representation of the same Cartesian point, centred on the opposite ring point.

    The returned point has toroidal angle v + pi; applying the map twice
    returns the original point with v advanced by 2pi.
    """
    a = 2.0 * g.R + p.w * math.cos(p.u)
    b = p.w * math.sin(p.u)
    w_t = math.hypot(a, b)
    u_t = math.atan2(b, -a) if w_t > 0 else 0.0
    return ToroidalPoint(w_t, u_t, p.v + math.pi)


def in_chart(g: TorusGeometry, p: ToroidalPoint) -> bool:
    """True where R + w cos u > 0, i.e. the point is not beyond the axis."""
    return g.R + p.w * math.cos(p.u) > 0


def scale_factors(g: TorusGeometry, p: ToroidalPoint) -> ScaleFactors:
    h_v = g.R + p.w * math.cos(p.u)
    return ScaleFactors(1.0, p.w, h_v, p.w * h_v)


def moon_spencer_to_cartesian(g: TorusGeometry, p: MoonSpencerPoint) -> CartesianPoint:
    x, y, z = moon_spencer_arrays(g, p.tau, p.theta, p.phi)
    return CartesianPoint(float(x), float(y), float(z))


def moon_spencer_arrays(g: TorusGeometry, tau, theta, phi):
    den = np.cosh(tau) - np.cos(theta)
    rho = g.R * np.sinh(tau) / den
    return rho * np.cos(phi), rho * np.sin(phi), g.R * np.sin(theta) / den


def cartesian_to_moon_spencer(g: TorusGeometry, c: CartesianPoint) -> MoonSpencerPoint:
    rho = math.hypot(c.x, c.y)
    if rho == 0.0:
        raise DegenerateAxis("tau = 0 on the z-axis")
    d1 = math.hypot(rho + g.R, c.z)
    d2 = math.hypot(rho - g.R, c.z)
    if d2 == 0.0:
        raise DegenerateAxis("tau is infinite on the focal ring")
    tau = math.log(d1 / d2)
    theta = math.atan2(2.0 * g.R * c.z, rho * rho + c.z * c.z - g.R * g.R)
    phi = math.atan2(c.y, c.x)
    return MoonSpencerPoint(tau, theta, phi)


def moon_spencer_from_toroidal_arrays(g: TorusGeometry, w, u, v):
    """(tau, theta, phi) of toroidal-poloidal points; phi is v itself (unreduced)."""
    rho = chart_factor(g, w, u)
    z = g.s_z * w * np.sin(u)
    d1 = np.hypot(rho + g.R, z)
    d2 = np.hypot(rho - g.R, z)
    with np.errstate(divide="ignore"):
        tau = np.log(d1 / d2)
    theta = np.arctan2(2.0 * g.R * z, rho * rho + z * z - g.R * g.R)
    # y = s_y rho sin v, so the azimuth is s_y v
    return tau, theta, g.s_y * np.asarray(v, dtype=float)
