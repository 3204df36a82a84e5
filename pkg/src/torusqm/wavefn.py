"""Eigenfunction families in toroidal-poloidal and Moon-Spencer coordinates.

Every toroidal-poloidal state has the form

    psi(w, u, v) = f(w) exp(i m u) exp(-i nu v) / sqrt(R + w cos u)

with nu = 1/2 except for the first external potential, where
nu = sqrt(1 + T2)/2. The factor (R + w cos u)^(-1/2) exp(-i v/2) equals
(x + i y)^(-1/2); it makes psi change sign under v -> v + 2pi.

Potentials enter the operator with a plus sign,

    Laplacian(psi) + (k^2 + V) psi = 0,

which is the convention the Heun parameter sets were derived in. The
conventional Schroedinger form would carry -2 m* V / hbar^2 instead.

Heun parameter sets and the magnetic shift are reproduced verbatim by default
(``variant="printed"``). Three printed entries do not solve the radial
equation for general couplings; ``variant="consistent"`` swaps in the values
that do (see ``heun_params_case1``, ``heun_params_case2`` and ``Magnetic``).
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np

from . import specfun
from .coords import (
    CartesianPoint,
    MoonSpencerPoint,
    ToroidalPoint,
    TorusGeometry,
    cartesian_arrays,
    chart_factor,
    moon_spencer_from_toroidal_arrays,
    sqrt_g,
)
from .errors import ChartError, ParameterError
from .specfun import HeunParams

Variant = Literal["printed", "consistent"]


@dataclass(frozen=True)
class SeparationConstants:
    """Exponents of the ansatz w^A (R + w cos u)^B f(w) exp(i alpha u) exp(C v)."""

    alpha: int
    A: float = 0.0
    B: float = -0.5
    C: complex = -0.5j


def separation_constants(m: int) -> SeparationConstants:
    return SeparationConstants(alpha=int(m))


def r_factor(g: TorusGeometry, w, u, v):
    """(R + w cos u)^(-1/2) exp(-i v/2); |r_factor|^2 |x + i y| = 1."""
    return np.exp(-0.5j * np.asarray(v, dtype=float)) / np.sqrt(chart_factor(g, w, u))


# ---------------------------------------------------------------------------
# potentials and prefactors


@dataclass(frozen=True)
class PotentialCase1Params:
    """Couplings of V(w, u) = 4 U1 w + 4 U2 w^2 + V1/w + V2/w^2 + T2 / (4 (R + w cos u)^2)."""

    U1: float = 0.0
    U2: float = -1.0
    V1: float = 0.0
    V2: float = 0.0
    T2: float = 0.0

    def __post_init__(self):
        if not self.U2 < 0:
            raise ParameterError(f"U2 must be negative, got {self.U2}")
        if self.T2 < -1:
            raise ParameterError("T2 must be >= -1 so that sqrt(1 + T2) is real")

    def potential(self, g: TorusGeometry, w, u):
        h = chart_factor(g, w, u)
        return (4 * self.U1 * w + 4 * self.U2 * w * w + self.V1 / w + self.V2 / w**2
                + self.T2 / (4 * h * h))


@dataclass(frozen=True)
class PotentialCase2Params:
    """Couplings of V(w) = V0 + V1/w + V2/w^2 + V3/w^3 + V4/(4 w^4)."""

    V0: float = 0.0
    V1: float = 0.0
    V2: float = 0.0
    V3: float = 0.0
    V4: float = 1.0

    def __post_init__(self):
        if not self.V4 > 0:
            raise ParameterError(f"V4 must be positive, got {self.V4}")

    @property
    def p(self) -> float:
        return self.V3 / math.sqrt(self.V4)

    def kappa(self, k: float) -> float:
        arg = k * k + self.V0
        if arg < 0:
            raise ParameterError("k^2 + V0 must be non-negative")
        return math.sqrt(arg)

    def potential(self, g: TorusGeometry, w, u=None):
        return self.V0 + self.V1 / w + self.V2 / w**2 + self.V3 / w**3 + self.V4 / (4 * w**4)


@dataclass(frozen=True)
class RadialPrefactor:
    """exp(quad w^2 + lin w + inv / w) * w^power."""

    power: complex = 0.0
    lin: complex = 0.0
    quad: complex = 0.0
    inv: complex = 0.0

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            expo = self.quad * w * w + self.lin * w + (self.inv / w if self.inv != 0 else 0.0)
            return np.exp(expo) * np.power(w.astype(complex), self.power)

    def describe(self) -> str:
        return f"exp({self.quad:.6g} w^2 + {self.lin:.6g} w + {self.inv:.6g}/w) * w^({self.power:.6g})"


def _exponent(m, V2):
    return cmath.sqrt(m * m - V2)


def heun_params_case1(m: int, k: float, params: PotentialCase1Params, branch: int = 1,
                      variant: Variant = "printed"):
    """HeunB parameter set and radial prefactor for the first external potential.

    Branch 1 solves the radial equation exactly. The printed branch-2 set has
    delta = 0 and omits U1^2 / (-U2) from alpha, so it only solves the equation
    when U1 = 0; ``variant="consistent"`` restores both terms.
    """
    lam = _exponent(m, params.V2)
    s = math.sqrt(-params.U2)
    U1, U2, V1 = params.U1, params.U2, params.V1
    if branch == 1:
        hp = HeunParams(
            q=-V1 + (1 + 2 * lam) / s * U1,
            alpha=k * k - U1 * U1 / U2 + 4 * s * (1 + lam),
            gamma=1 + 2 * lam,
            delta=-2 * U1 / s,
            epsilon=4 * s,
        )
        power = lam
    elif branch == 2:
        if variant == "printed":
            alpha = k * k + 4 * s * (1 - lam)
            delta = 0.0
        else:
            alpha = k * k - U1 * U1 / U2 + 4 * s * (1 - lam)
            delta = -2 * U1 / s
        hp = HeunParams(
            q=-V1 + (1 - 2 * lam) / s * U1,
            alpha=alpha,
            gamma=1 - 2 * lam,
            delta=delta,
            epsilon=4 * s,
        )
        power = -lam
    else:
        raise ParameterError("branch must be 1 or 2")
    if not hp.heun_b_allowed():
        raise ParameterError(f"gamma = {hp.gamma} is forbidden for HeunB; use the other branch")
    # U2 (U1 + U2 w) w / (-U2)^(3/2)
    pre = RadialPrefactor(power=power, lin=U2 * U1 / s**3, quad=U2 * U2 / s**3)
    return hp, pre


def heun_params_case2(m: int, k: float, params: PotentialCase2Params, branch: int = 1,
                      variant: Variant = "printed"):
    """HeunD parameter set and radial prefactor for the second external potential.

    The printed branch-1 alpha lacks the V1 term that branch 2 carries; it
    solves the radial equation only for V1 = 0. ``variant="consistent"``
    uses V1 - 2 kappa (p + i).
    """
    p = params.p
    kap = params.kappa(k)
    sv4 = math.sqrt(params.V4)
    base = -0.25 + m * m - params.V2 + kap * sv4
    if branch == 1:
        alpha = -2 * kap * (p + 1j)
        if variant == "consistent":
            alpha = params.V1 + alpha
        hp = HeunParams(q=base + p * (1j + p), alpha=alpha, gamma=-1j * sv4,
                        delta=2 * (1 - 1j * p), epsilon=-2j * kap)
        pre = RadialPrefactor(power=0.5 - 1j * p, lin=-1j * kap, inv=0.5j * sv4)
    elif branch == 2:
        hp = HeunParams(q=base + p * (-1j + p), alpha=params.V1 - 2 * kap * (p - 1j),
                        gamma=1j * sv4, delta=2 * (1 + 1j * p), epsilon=2j * kap)
        pre = RadialPrefactor(power=0.5 + 1j * p, lin=1j * kap, inv=-0.5j * sv4)
    else:
        raise ParameterError("branch must be 1 or 2")
    return hp, pre


# ---------------------------------------------------------------------------
# states


class _ToroidalState:
    """Shared evaluation for states of the form f(w) e^{imu} e^{-i nu v} / sqrt(h)."""

    m: int
    k: float

    @property
    def v_rate(self) -> float:
        return 0.5

    @property
    def monodromy(self) -> complex:
        """Factor acquired under v -> v + 2pi."""
        return cmath.exp(-2j * math.pi * self.v_rate)

    @property
    def operator_k(self) -> float:
        """Wavenumber entering Laplacian + (k^2 + V)."""
        return self.k

    def potential(self, g: TorusGeometry, w, u):
        return np.zeros(np.broadcast(w, u).shape)

    def radial(self, g: TorusGeometry, w):
        raise NotImplementedError

    def evaluate_arrays(self, g: TorusGeometry, w, u, v):
        w, u, v = (np.asarray(a, dtype=float) for a in np.broadcast_arrays(w, u, v))
        h = chart_factor(g, w, u)
        ok = h > 0
        out = np.full(w.shape, np.nan + 0j)
        if np.any(ok):
            wo, uo, vo = w[ok], u[ok], v[ok]
            out[ok] = (self.radial(g, wo) * np.exp(1j * self.m * uo)
                       * np.exp(-1j * self.v_rate * vo) / np.sqrt(h[ok]))
        return out


@dataclass(frozen=True)
class FreeToroidal(_ToroidalState):
    """A J_m(k w) e^{imu} e^{-iv/2} / sqrt(R + w cos u)."""

    m: int
    k: float
    amplitude: complex = 1.0

    def radial(self, g, w):
        return self.amplitude * specfun.bessel_j(self.m, self.k * np.asarray(w, dtype=float))


def well_eigenvalue(g: TorusGeometry, m: int, n: int, a: float):
    """Wavenumber j_{m,n}/a and energy hbar^2 k^2 / (2 m*) of the infinite toroidal well."""
    if not 0 < a <= g.R:
        raise ParameterError(f"minor radius must satisfy 0 < a <= R, got a={a}, R={g.R}")
    k = specfun.bessel_j_zero(abs(int(m)), n) / a
    return k, g.energy(k)


def normalization_constant(g: TorusGeometry, m: int, n: int, a: float) -> float:
    """A_{m,n} with the integral of |psi|^2 dV over the well equal to 1.

    The weight R + w cos u cancels against |psi|^2, leaving
    A = 1 / (pi a sqrt(2) |J_{m+1}(j_{m,n})|).
    """
    if not 0 < a <= g.R:
        raise ParameterError(f"minor radius must satisfy 0 < a <= R, got a={a}, R={g.R}")
    mm = abs(int(m))
    j = specfun.bessel_j_zero(mm, n)
    return 1.0 / (math.pi * a * math.sqrt(2.0) * abs(specfun.bessel_j(mm + 1, j)))


@dataclass(frozen=True)
class WellEigenstate(_ToroidalState):
    """Normalized eigenstate of the infinite well w < a; zero outside."""

    m: int
    n: int
    a: float
    R: float = 1.0
    normalized: bool = True
    k: float = field(init=False)
    amplitude: float = field(init=False)

    def __post_init__(self):
        g = TorusGeometry(R=self.R)
        k, _ = well_eigenvalue(g, self.m, self.n, self.a)
        amp = normalization_constant(g, self.m, self.n, self.a) if self.normalized else 1.0
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "amplitude", amp)

    def radial(self, g, w):
        w = np.asarray(w, dtype=float)
        vals = self.amplitude * specfun.bessel_j(self.m, self.k * np.minimum(w, self.a))
        return np.where(w <= self.a, vals, 0.0)


@dataclass(frozen=True)
class Magnetic(_ToroidalState):
    """Weak uniform field B0 z-hat: B J_m(kappa w) e^{imu} e^{-iv/2} / sqrt(R + w cos u).

    ``variant="printed"`` uses kappa^2 = k^2 + q B0 / (2 hbar). Substituting
    the e^{-iv/2} dependence into the field equation gives
    kappa^2 = k^2 - q B0 / (2 hbar) instead; that is ``variant="consistent"``.
    """

    m: int
    k: float
    charge: float
    B0: float
    hbar: float = 1.0
    amplitude: complex = 1.0
    variant: Variant = "printed"

    @property
    def kappa(self) -> float:
        shift = self.charge * self.B0 / (2.0 * self.hbar)
        k2 = self.k**2 + (shift if self.variant == "printed" else -shift)
        if k2 <= 0:
            raise ParameterError("kappa^2 must be positive")
        return math.sqrt(k2)

    def radial(self, g, w):
        return self.amplitude * specfun.bessel_j(self.m, self.kappa * np.asarray(w, dtype=float))


@dataclass(frozen=True)
class PotentialCase1(_ToroidalState):
    """c exp[U2 (U1 + U2 w) w / (-U2)^{3/2}] w^{+-l} HeunB({1|2}; w) e^{imu - iv sqrt(1+T2)/2} / sqrt(h)."""

    m: int
    k: float
    params: PotentialCase1Params
    branch: int = 1
    coefficient: complex = 1.0
    variant: Variant = "printed"

    @property
    def v_rate(self) -> float:
        return 0.5 * math.sqrt(1.0 + self.params.T2)

    @property
    def regime(self) -> str:
        return "oscillatory-singular" if self.m * self.m < self.params.V2 else "regular"

    def heun(self):
        return heun_params_case1(self.m, self.k, self.params, self.branch, self.variant)

    def potential(self, g, w, u):
        return self.params.potential(g, w, u)

    def radial(self, g, w):
        hp, pre = self.heun()
        w = np.asarray(w, dtype=float)
        y, _ = specfun.heun_b_array(hp, w.astype(complex))
        return self.coefficient * pre(w) * y


@dataclass(frozen=True)
class PotentialCase2(_ToroidalState):
    """c exp(-+i kappa w +- i sqrt(V4)/(2w)) w^{1/2 -+ ip} HeunD({1|2}; w) e^{imu - iv/2} / sqrt(h).

    HeunD is normalized y(anchor) = 1, y'(anchor) = 0; points with
    w < 1e-3 evaluate to NaN (irregular singularity at w = 0).
    """

    m: int
    k: float
    params: PotentialCase2Params
    branch: int = 1
    coefficient: complex = 1.0
    anchor: float = 0.5
    variant: Variant = "printed"

    def heun(self):
        return heun_params_case2(self.m, self.k, self.params, self.branch, self.variant)

    def potential(self, g, w, u):
        return self.params.potential(g, w) + np.zeros(np.broadcast(w, u).shape)

    def radial(self, g, w):
        hp, pre = self.heun()
        w = np.asarray(w, dtype=float)
        out = np.full(w.shape, np.nan + 0j)
        ok = w >= specfun.HEUN_D_MIN_DISTANCE
        if np.any(ok):
            y, _ = specfun.heun_d_array(hp, self.anchor, w[ok])
            out[ok] = self.coefficient * pre(w[ok]) * y
        return out


@dataclass(frozen=True)
class BesselCase2(_ToroidalState):
    """Second potential with V1 = V3 = V4 = 0: [c J_l(kappa w) + d J_{-l}(kappa w)] e^{imu - iv/2} / sqrt(h).

    l = sqrt(m^2 - V2), kappa = sqrt(k^2 + V0).
    """

    m: int
    k: float
    V0: float = 0.0
    V2: float = 0.0
    c: complex = 1.0
    d: complex = 0.0

    def __post_init__(self):
        if self.m * self.m < self.V2:
            raise ParameterError("m^2 >= V2 is required for a real Bessel order")
        if self.k * self.k + self.V0 < 0:
            raise ParameterError("k^2 + V0 must be non-negative")

    @property
    def order(self) -> float:
        return math.sqrt(self.m * self.m - self.V2)

    @property
    def kappa(self) -> float:
        return math.sqrt(self.k * self.k + self.V0)

    @property
    def order_collision(self) -> bool:
        """J_l and J_{-l} are linearly dependent for integer l."""
        return float(self.order).is_integer()

    def potential(self, g, w, u):
        w = np.asarray(w, dtype=float)
        return self.V0 + self.V2 / w**2 + np.zeros(np.broadcast(w, u).shape)

    def radial(self, g, w):
        x = self.kappa * np.asarray(w, dtype=float)
        out = self.c * specfun.bessel_j(self.order, x)
        if self.d != 0:
            out = out + self.d * specfun.bessel_j(-self.order, x)
        return out


@dataclass(frozen=True)
class MoonSpencer:
    """e^{i phi/2} [c1 J_{1/2}(zt) + c2 H1_{1/2}(zt)], zt = k R sinh(tau) / (cosh(tau) - cos(theta))."""

    k: float
    c1: complex = 1.0
    c2: complex = 0.0

    @property
    def monodromy(self) -> complex:
        return -1.0 + 0j

    @property
    def operator_k(self) -> float:
        return self.k

    def evaluate_ms_arrays(self, g: TorusGeometry, tau, theta, phi):
        tau, theta, phi = (np.asarray(a, dtype=float) for a in np.broadcast_arrays(tau, theta, phi))
        zt = self.k * g.R * np.sinh(tau) / (np.cosh(tau) - np.cos(theta))
        s = np.sqrt(2.0 / (np.pi * zt))
        j_half = s * np.sin(zt)
        h_half = -1j * s * np.exp(1j * zt)
        return np.exp(0.5j * phi) * (self.c1 * j_half + self.c2 * h_half)

    def evaluate_arrays(self, g: TorusGeometry, w, u, v):
        tau, theta, phi = moon_spencer_from_toroidal_arrays(g, *np.broadcast_arrays(w, u, v))
        return self.evaluate_ms_arrays(g, tau, theta, phi)


def moon_spencer_exponential(g: TorusGeometry, k: float, sign: int, tau, theta, phi):
    """exp(+-i k R sinh(tau)/D) sqrt(e^{i phi} D / sinh(tau)), D = cosh(tau) - cos(theta).

    The square root of e^{i phi} is taken as e^{i phi/2} with phi unreduced.
    """
    den = np.cosh(tau) - np.cos(theta)
    zt = k * g.R * np.sinh(tau) / den
    return np.exp(sign * 1j * zt) * np.exp(0.5j * np.asarray(phi, dtype=float)) * np.sqrt(den / np.sinh(tau))


QuantumState = Union[FreeToroidal, WellEigenstate, MoonSpencer, Magnetic,
                     PotentialCase1, PotentialCase2, BesselCase2]

TOROIDAL_FAMILIES = (FreeToroidal, WellEigenstate, Magnetic, PotentialCase1, PotentialCase2, BesselCase2)


# ---------------------------------------------------------------------------
# evaluation


def evaluate(g: TorusGeometry, state: QuantumState, p) -> complex:
    """Amplitude of ``state`` at a ToroidalPoint (or MoonSpencerPoint for Moon-Spencer states)."""
    if isinstance(p, MoonSpencerPoint):
        if not isinstance(state, MoonSpencer):
            raise TypeError("Moon-Spencer points can only be used with MoonSpencer states")
        return complex(state.evaluate_ms_arrays(g, p.tau, p.theta, p.phi))
    if isinstance(p, CartesianPoint):
        raise TypeError("convert Cartesian points with coords.from_cartesian first")
    if g.R + p.w * math.cos(p.u) <= 0:
        raise ChartError(f"R + w cos u <= 0 at {p}")
    return complex(state.evaluate_arrays(g, p.w, p.u, p.v))


def evaluate_arrays(g: TorusGeometry, state: QuantumState, w, u, v):
    """Vectorized amplitude; NaN where the point is outside the chart."""
    return state.evaluate_arrays(g, w, u, v)


def bessel_special_case2(m: int, k: float, V0: float, V2: float, p: ToroidalPoint,
                         g: TorusGeometry | None = None, c: complex = 1.0, d: complex = 0.0) -> complex:
    g = g or TorusGeometry()
    return evaluate(g, BesselCase2(m=m, k=k, V0=V0, V2=V2, c=c, d=d), p)


# ---------------------------------------------------------------------------
# Moon-Spencer well


@dataclass(frozen=True)
class FeasibilityReport:
    cos_theta: float
    locus: tuple
    traps_particle: bool = False

    @property
    def empty(self) -> bool:
        return not self.locus


def moon_spencer_well_feasibility(k: float, R: float, a: float, n: int) -> FeasibilityReport:
    """Where the Moon-Spencer solution can vanish on the surface tau = a.

    cos(theta) = cosh(a) - (k R / (n pi)) sinh(a) fixes at most two angles,
    so the boundary condition never holds on the whole surface.
    """
    if not a > 0 or n < 1:
        raise ParameterError("need a > 0 and n >= 1")
    c = math.cosh(a) - k * R / (n * math.pi) * math.sinh(a)
    if abs(c) > 1:
        locus = ()
    else:
        t = math.acos(max(-1.0, min(1.0, c)))
        locus = (t,) if t in (0.0, math.pi) else (t, 2 * math.pi - t)
    return FeasibilityReport(cos_theta=c, locus=locus, traps_particle=False)


# ---------------------------------------------------------------------------
# density grids


GRID_COLUMNS = ("w", "u", "v", "x", "y", "z", "re", "im", "density", "mask")


@dataclass
class DensityGrid:
    """Tabulated sigma |psi|^2 with sigma = w (R + w cos u), the surface weight at fixed w."""

    columns: dict

    def __len__(self):
        return len(self.columns["w"])

    def rows(self):
        cols = [self.columns[c] for c in GRID_COLUMNS]
        return zip(*cols)


def density_grid(g: TorusGeometry, state: QuantumState, w, u, v, threads: int = 1) -> DensityGrid:
    """Evaluate ``state`` on the tensor grid of 1-D axes ``w``, ``u``, ``v`` (w slowest).

    With ``threads > 1`` blocks of rows are evaluated concurrently; the
    result is assembled in row order, so output does not depend on scheduling.
    """
    W, U, V = np.meshgrid(np.atleast_1d(w), np.atleast_1d(u), np.atleast_1d(v), indexing="ij")
    W, U, V = W.ravel(), U.ravel(), V.ravel()
    if threads > 1 and W.size > 1:
        blocks = np.array_split(np.arange(W.size), threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda idx: state.evaluate_arrays(g, W[idx], U[idx], V[idx]), blocks))
        psi = np.concatenate(parts)
    else:
        psi = state.evaluate_arrays(g, W, U, V)
    x, y, z = cartesian_arrays(g, W, U, V)
    mask = ~np.isfinite(psi) | (chart_factor(g, W, U) <= 0)
    sigma = sqrt_g(g, W, U)
    dens = np.where(mask, np.nan, sigma * np.abs(psi) ** 2)
    return DensityGrid({
        "w": W, "u": U, "v": V, "x": x, "y": y, "z": z,
        "re": np.where(mask, np.nan, psi.real), "im": np.where(mask, np.nan, psi.imag),
        "density": dens, "mask": mask.astype(int),
    })
