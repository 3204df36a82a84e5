"""Green function of the toroidal-poloidal Helmholtz operator and the plane-wave expansion.

Two forms are provided and deliberately left with their own constants:

* the bilinear mode sum
  G_s = (i pi/2) e^{i(v'-v)/2} / sqrt(h h') * sum_m J_m(k w_<) H_m(k w_>) e^{im(u-u')}
* the closed form
  G_c = -(1/16) H_0(k d) / (sqrt(h e^{iv}) sqrt(h' e^{iv'}))

with h = R + w cos u and d the in-plane distance between (w, u) and (w', u').
By Graf's addition theorem the mode sum equals H_0(k d), so G_s / G_c is the
constant -8 pi i e^{iv'}. ``consistency_report`` measures that ratio instead
of assuming it.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .coords import ToroidalPoint, TorusGeometry
from .errors import ChartError, CoincidenceError, NonconvergedError, ParameterError

SERIES_PREFACTOR = 0.5j * math.pi
CLOSED_PREFACTOR = -1.0 / 16.0
PLANE_WAVE_PREFACTOR = -8j * math.pi


@dataclass(frozen=True)
class RadialGreenCoeffs:
    """a_m = (i pi/2) H_m(k w'), d_m = (i pi/2) J_m(k w'); b_m = c_m = 0."""

    m: int
    a: complex
    d: complex

    @classmethod
    def at(cls, m: int, k: float, w_src: float) -> "RadialGreenCoeffs":
        x = k * w_src
        return cls(m, SERIES_PREFACTOR * specfun.hankel1(m, x), SERIES_PREFACTOR * specfun.bessel_j(m, x))


@dataclass(frozen=True)
class JumpReport:
    m: int
    x: float
    continuity: complex
    lhs: complex
    rhs: float

    @property
    def difference(self) -> float:
        return abs(self.lhs - self.rhs)


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    core: complex
    tail: float
    M_max: int


def _h(g: TorusGeometry, p: ToroidalPoint) -> float:
    h = g.R + p.w * math.cos(p.u)
    if h <= 0:
        raise ChartError(f"R + w cos u <= 0 at {p}")
    return h


def cross_section_distance(field_pt: ToroidalPoint, source: ToroidalPoint) -> float:
    """Law-of-cosines distance between (w, u) and (w', u') in the poloidal plane.

    Written as (w - w')^2 + 4 w w' sin^2((u - u')/2) to avoid cancellation
    for nearby points.
    """
    s = math.sin(0.5 * (field_pt.u - source.u))
    return math.sqrt((field_pt.w - source.w) ** 2 + 4.0 * field_pt.w * source.w * s * s)


def default_order(k: float, w_big: float) -> int:
    return int(math.ceil(k * w_big)) + 30


def _jh_terms(m_max: int, x_small: float, x_big: float):
    """J_m(x_small) H_m(x_big) for m = 0..m_max, zero where J underflows."""
    out = np.zeros(m_max + 1, dtype=complex)
    for m in range(m_max + 1):
        j = specfun.bessel_j(m, x_small)
        if j == 0.0:
            break
        hm = specfun.hankel1(m, x_big)
        if not cmath.isfinite(hm):
            break
        out[m] = j * hm
    return out


def graf_sum(k: float, field_pt: ToroidalPoint, source: ToroidalPoint, M_max: int | None = None):
    """sum_{|m| <= M} J_m(k w_<) H_m(k w_>) e^{im(u-u')}, summed in ascending |m|.

    Returns (sum, tail) where tail bounds the last two retained orders.
    """
    w_lo, w_hi = sorted((field_pt.w, source.w))
    M = default_order(k, w_hi) if M_max is None else int(M_max)
    terms = _jh_terms(M, k * w_lo, k * w_hi)
    du = field_pt.u - source.u
    weights = np.cos(np.arange(M + 1) * du) * 2.0
    weights[0] = 1.0
    total = complex(0.0)
    for m in range(M + 1):
        total += weights[m] * terms[m]
    tail = 2.0 * float(np.max(np.abs(terms[max(M - 1, 0):]))) if M > 0 else float(abs(terms[0]))
    return total, tail


def green_series(g: TorusGeometry, field_pt: ToroidalPoint, source: ToroidalPoint, k: float,
                 M_max: int | None = None, tol: float = 1e-10) -> SeriesResult:
    """Bilinear mode sum; NonconvergedError when the last orders exceed ``tol`` relative to the sum."""
    if not k > 0:
        raise ParameterError("k must be positive")
    h, hp = _h(g, field_pt), _h(g, source)
    if cross_section_distance(field_pt, source) == 0.0:
        raise CoincidenceError("field and source share (w, u)")
    core, tail = graf_sum(k, field_pt, source, M_max)
    M = default_order(k, max(field_pt.w, source.w)) if M_max is None else int(M_max)
    if tail > tol * max(abs(core), 1e-300):
        raise NonconvergedError(f"mode sum tail {tail:.3e} exceeds tolerance at M_max={M}")
    phase = cmath.exp(0.5j * (source.v - field_pt.v))
    value = SERIES_PREFACTOR * phase * core / math.sqrt(h * hp)
    return SeriesResult(value, core, tail, M)


def green_closed(g: TorusGeometry, field_pt: ToroidalPoint, source: ToroidalPoint, k: float) -> complex:
    """Closed form with the constant -1/16 and sqrt(e^{iv}) = e^{iv/2} for unreduced v."""
    if not k > 0:
        raise ParameterError("k must be positive")
    h, hp = _h(g, field_pt), _h(g, source)
    d = cross_section_distance(field_pt, source)
    if d == 0.0:
        raise CoincidenceError("closed form is logarithmically singular at zero displacement")
    den = math.sqrt(h) * cmath.exp(0.5j * field_pt.v) * math.sqrt(hp) * cmath.exp(0.5j * source.v)
    return CLOSED_PREFACTOR * specfun.hankel1(0, k * d) / den


def green_farfield(g: TorusGeometry, field_pt: ToroidalPoint, source: ToroidalPoint, k: float,
                   M_max: int | None = None, variant: str = "printed") -> complex:
    """Mode sum with H_m(k w') replaced by its leading large-argument form.

    ``variant="printed"`` keeps sqrt(w' cos u') and the bare 1/sqrt(2); the
    leading Hankel asymptotic actually supplies e^{-i pi/4} and the mode sum
    carries sqrt(R + w' cos u'), which ``variant="consistent"`` uses.
    """
    kw = k * field_pt.w
    M = int(math.ceil(kw)) + 30 if M_max is None else int(M_max)
    du = field_pt.u - source.u
    core = complex(specfun.bessel_j(0, kw))
    for m in range(1, M + 1):
        core += 2.0 * (-1j) ** m * specfun.bessel_j(m, kw) * math.cos(m * du)
    amp = math.sqrt(2.0 / (k * math.pi * source.w)) * cmath.exp(1j * k * source.w)
    if variant == "printed":
        amp /= math.sqrt(2.0)
        hp = source.w * math.cos(source.u)
    elif variant == "consistent":
        amp *= cmath.exp(-0.25j * math.pi)
        hp = g.R + source.w * math.cos(source.u)
    else:
        raise ParameterError("variant must be 'printed' or 'consistent'")
    phase = cmath.exp(0.5j * (source.v - field_pt.v))
    return SERIES_PREFACTOR * phase * amp * core / (math.sqrt(_h(g, field_pt)) * cmath.sqrt(hp))


def radial_green_jump(m: int, k: float, w_src: float) -> JumpReport:
    """Continuity a J - d H and the derivative jump -a J' + d H' against -1/(k w')."""
    if not w_src > 0:
        raise ParameterError("w' must be positive")
    x = k * w_src
    c = RadialGreenCoeffs.at(m, k, w_src)
    j, jp = specfun.bessel_j_pair(m, x)
    hm, hmp = specfun.hankel1_pair(m, x)
    return JumpReport(m=m, x=x, continuity=c.a * j - c.d * hm, lhs=-c.a * jp + c.d * hmp, rhs=-1.0 / x)


@dataclass(frozen=True)
class PlaneWaveResult:
    value: complex
    core: complex
    M_max: int
    tail: float


def jacobi_anger_core(z: float, theta: float, M_max: int | None = None):
    """sum_{|m| <= M} i^m J_m(z) e^{im theta}; returns (sum, tail)."""
    M = int(math.ceil(abs(z))) + 25 if M_max is None else int(M_max)
    total = complex(specfun.bessel_j(0, z))
    last = abs(total)
    for m in range(1, M + 1):
        t = 2.0 * (1j) ** m * specfun.bessel_j(m, z) * math.cos(m * theta)
        total += t
        last = abs(t)
    return total, last


def plane_wave_series(g: TorusGeometry, k_vec, p: ToroidalPoint, M_max: int | None = None,
                      tol: float = 1e-10) -> PlaneWaveResult:
    """-8 pi i e^{-i v_k} sum_m i^m J_m(k w) e^{im(u - u_k)} truncated at M_max."""
    k, u_k, v_k = k_vec
    if not k > 0:
        raise ParameterError("k must be positive")
    core, tail = jacobi_anger_core(k * p.w, p.u - u_k, M_max)
    M = int(math.ceil(k * p.w)) + 25 if M_max is None else int(M_max)
    if tail > tol:
        raise NonconvergedError(f"plane-wave tail {tail:.3e} exceeds tolerance at M_max={M}")
    return PlaneWaveResult(PLANE_WAVE_PREFACTOR * cmath.exp(-1j * v_k) * core, core, M, tail)


@dataclass
class ConsistencyReport:
    k: float
    seed: int
    ratios: np.ndarray
    constant: complex
    variance: float
    v_dependence_error: float
    expected_constant: complex = field(default=PLANE_WAVE_PREFACTOR)

    @property
    def proportional(self) -> bool:
        return self.variance < 1e-8

    def lines(self):
        c = self.constant
        return [
            f"k = {self.k:.17g}",
            f"pairs = {len(self.ratios)}",
            f"series/closed constant (v'=0) = {c.real:.17g} {c.imag:+.17g}i",
            f"|constant| = {abs(c):.17g} (8 pi = {8 * math.pi:.17g})",
            f"ratio variance = {self.variance:.3e}",
            f"max |ratio e^(-iv') - constant| over v' sweep = {self.v_dependence_error:.3e}",
            "series prefactor i pi/2, closed prefactor -1/16, plane-wave prefactor -8 pi i",
        ]


def consistency_report(g: TorusGeometry, k: float, n_pairs: int = 100, seed: int = 0,
                       v: float = 0.0, v_src: float = 0.0) -> ConsistencyReport:
    """Ratio green_series / green_closed over seeded random non-coincident pairs.

    The larger radius is drawn from [0.1 R, 0.9 R] and the smaller is at most
    half of it, so the mode sum converges geometrically at the default order.
    Field and source take turns holding the larger radius.
    """
    rng = np.random.default_rng(seed)
    ratios = []
    for i in range(n_pairs):
        w_hi = rng.uniform(0.1, 0.9) * g.R
        w_lo = w_hi * rng.uniform(0.05, 0.5)
        w1, w2 = (w_lo, w_hi) if i % 2 else (w_hi, w_lo)
        u1, u2 = rng.uniform(0, 2 * math.pi, 2)
        a, b = ToroidalPoint(w1, u1, v), ToroidalPoint(w2, u2, v_src)
        ratios.append(green_series(g, a, b, k).value / green_closed(g, a, b, k))
    ratios = np.asarray(ratios)
    c = complex(np.mean(ratios * np.exp(-1j * v_src)))
    var = float(np.mean(np.abs(ratios - np.mean(ratios)) ** 2))
    a, b = ToroidalPoint(0.3 * g.R, 0.4, v), ToroidalPoint(0.7 * g.R, 2.0, 0.0)
    err = 0.0
    for vs in np.linspace(0, 4 * math.pi, 9):
        b2 = ToroidalPoint(b.w, b.u, float(vs))
        r = green_series(g, a, b2, k).value / green_closed(g, a, b2, k)
        err = max(err, abs(r * cmath.exp(-1j * vs) - c))
    return ConsistencyReport(k=k, seed=seed, ratios=ratios, constant=c, variance=var, v_dependence_error=err)
