"""Special functions: Bessel J/Y, Hankel H1, Bessel zeros, HeunB and HeunD.

Bessel functions of real order are computed by the Temme/Steed scheme in the
kernel backend (compiled when available). Negative orders use the reflection
formulas. HeunB is the Maclaurin series normalized to y(0) = 1; HeunD is
integrated by Taylor-series marching from an anchor where y = 1, y' = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import (
    ConvergenceError,
    DomainError,
    ParameterError,
    SingularityError,
    StiffnessError,
)

__all__ = [
    "HeunParams",
    "bessel_jy",
    "bessel_j",
    "bessel_y",
    "bessel_j_pair",
    "hankel1",
    "hankel1_pair",
    "bessel_j_zero",
    "bessel_j_zeros",
    "heun_b",
    "heun_b_array",
    "heun_b_residual",
    "heun_d",
    "heun_d_array",
    "HEUN_D_MIN_DISTANCE",
]

HEUN_D_MIN_DISTANCE = 1e-3


@dataclass(frozen=True)
class HeunParams:
    """Parameters (q, alpha, gamma, delta, epsilon) of a confluent Heun equation.

    HeunB:  z y'' + (gamma + delta z + epsilon z^2) y' + (alpha z - q) y = 0
    HeunD:  z^2 y'' + (gamma + delta z + epsilon z^2) y' + (alpha z - q) y = 0
    """

    q: complex
    alpha: complex
    gamma: complex
    delta: complex
    epsilon: complex

    def __post_init__(self):
        for name in ("q", "alpha", "gamma", "delta", "epsilon"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def as_tuple(self):
        return (self.q, self.alpha, self.gamma, self.delta, self.epsilon)

    def heun_b_allowed(self) -> bool:
        g = self.gamma
        if abs(g.imag) > 1e-12:
            return True
        nearest = round(g.real)
        return not (nearest <= 0 and abs(g.real - nearest) < 1e-12)


# --------------------------------------------------------------------------
# Bessel functions


def _half_order(nu, x):
    s = math.sqrt(2.0 / (math.pi * x))
    sn, cs = math.sin(x), math.cos(x)
    if nu > 0:
        j, y = s * sn, -s * cs
        jp = s * (cs - sn / (2.0 * x))
        yp = s * (sn + cs / (2.0 * x))
    else:
        j, y = s * cs, s * sn
        jp = -s * (sn + cs / (2.0 * x))
        yp = s * (cs - sn / (2.0 * x))
    return j, y, jp, yp


def _reflect(mu, jy):
    """Map (J, Y, J', Y') of order mu >= 0 to order -mu."""
    j, y, jp, yp = jy
    if float(mu).is_integer():
        sgn = -1.0 if int(mu) % 2 else 1.0
        return sgn * j, sgn * y, sgn * jp, sgn * yp
    c, s = math.cos(mu * math.pi), math.sin(mu * math.pi)
    return (
        c * j - s * y,
        s * j + c * y,
        c * jp - s * yp,
        s * jp + c * yp,
    )


ASYMPTOTIC_X = 1000.0


def _hankel_asymptotic(nu, x):
    """H1_nu(x) from Hankel's expansion; used for x > max(1000, nu^2)."""
    mu = 4.0 * nu * nu
    total = term = 1.0 + 0j
    for k in range(1, 60):
        nxt = term * (mu - (2 * k - 1) ** 2) / (8.0 * k * x) * 1j
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        if abs(term) < 1e-17:
            break
    chi = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * complex(math.cos(chi), math.sin(chi)) * total


def _asymptotic_jy(nu, x):
    h = _hankel_asymptotic(nu, x)
    hp = _hankel_asymptotic(nu - 1.0, x) - nu / x * h
    return h.real, h.imag, hp.real, hp.imag


def bessel_jy(nu: float, x: float):
    """Return ``(J, Y, J', Y')`` of real order ``nu`` at ``x > 0``."""
    nu = float(nu)
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"bessel_jy needs x > 0, got {x}")
    if abs(nu) == 0.5:
        return _half_order(nu, x)
    if x > max(ASYMPTOTIC_X, nu * nu):
        return _asymptotic_jy(nu, x)
    try:
        jy = _kernels.bessel_jy(abs(nu), x)
    except ArithmeticError as exc:
        raise ConvergenceError(str(exc)) from exc
    if nu < 0:
        return _reflect(-nu, jy)
    return jy


def _j_at_zero(nu):
    if nu == 0:
        return 1.0
    if nu > 0 or float(nu).is_integer():
        return 0.0
    raise DomainError(f"J_{nu}(0) is infinite")


def _jp_at_zero(nu):
    if abs(nu) == 1:
        return 0.5 * nu
    if nu == 0 or abs(nu) > 1:
        return 0.0
    return math.inf


def bessel_j(nu: float, x):
    """Bessel function of the first kind J_nu(x) for x >= 0.

    Accepts a scalar or an array of ``x``.
    """
    nu = float(nu)
    if np.ndim(x) == 0:
        x = float(x)
        if x < 0:
            raise DomainError(f"bessel_j needs x >= 0, got {x}")
        if x == 0:
            return _j_at_zero(nu)
        return bessel_jy(nu, x)[0]
    return _bessel_array(nu, x)[0]


def _bessel_array(nu, x):
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise DomainError("bessel_j needs finite x >= 0")
    out = np.zeros((4,) + x.shape)
    pos = x > 0
    if np.any(~pos):
        out[0][~pos] = _j_at_zero(nu)
        out[1][~pos] = -np.inf
        out[2][~pos] = _jp_at_zero(nu)
        out[3][~pos] = np.inf
    if np.any(pos):
        xp = x[pos]
        if abs(nu) == 0.5 or np.any(xp > max(ASYMPTOTIC_X, nu * nu)):
            vals = np.array([bessel_jy(nu, float(t)) for t in xp]).T
        else:
            try:
                vals = _kernels.bessel_jy_array(abs(nu), xp)
            except ArithmeticError as exc:
                raise ConvergenceError(str(exc)) from exc
            if nu < 0:
                vals = np.array(_reflect(-nu, tuple(vals)))
        for i in range(4):
            out[i][pos] = vals[i]
    return out


def bessel_j_pair(nu: float, x):
    """Return ``(J_nu(x), J_nu'(x))``; scalar or array ``x``."""
    if np.ndim(x) == 0:
        x = float(x)
        if x == 0:
            vals = _bessel_array(float(nu), np.array([0.0]))
            return float(vals[0][0]), float(vals[2][0])
        j, _, jp, _ = bessel_jy(nu, x)
        return j, jp
    vals = _bessel_array(float(nu), x)
    return vals[0], vals[2]


def bessel_y(nu: float, x):
    if np.ndim(x) == 0:
        return bessel_jy(nu, x)[1]
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0):
        raise DomainError("bessel_y needs x > 0")
    return _bessel_array(float(nu), x)[1]


def hankel1(nu: float, x):
    """Hankel function of the first kind, H1_nu(x) = J_nu(x) + i Y_nu(x), x > 0."""
    if np.ndim(x) == 0:
        if not float(x) > 0:
            raise DomainError(f"hankel1 needs x > 0, got {x}")
        j, y, _, _ = bessel_jy(nu, x)
        return complex(j, y)
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0):
        raise DomainError("hankel1 needs x > 0")
    vals = _bessel_array(float(nu), x)
    return vals[0] + 1j * vals[1]


def hankel1_pair(nu: float, x: float):
    """Return ``(H1_nu(x), H1_nu'(x))`` at scalar ``x > 0``."""
    if not float(x) > 0:
        raise DomainError(f"hankel1 needs x > 0, got {x}")
    j, y, jp, yp = bessel_jy(nu, x)
    return complex(j, y), complex(jp, yp)


# --------------------------------------------------------------------------
# Zeros of J_m


def _mcmahon(m, n):
    beta = (n + 0.5 * m - 0.25) * math.pi
    mu = 4.0 * m * m
    b8 = 8.0 * beta
    return (
        beta
        - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8**3)
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * b8**5)
    )


def _bracket(m, n):
    # J_m > 0 on (0, j_{m,1}); consecutive zeros are more than 2.9 apart
    step = 1.0
    x = max(float(m), 1e-3)
    f = bessel_j(m, x)
    found = 0
    while True:
        x_next = x + step
        f_next = bessel_j(m, x_next)
        if f == 0.0 or f * f_next < 0:
            found += 1
            if found == n:
                return x, x_next, f
        x, f = x_next, f_next


@lru_cache(maxsize=4096)
def bessel_j_zero(m: int, n: int) -> float:
    """n-th positive zero of J_m by safeguarded Newton iteration.

    The iteration is seeded by McMahon's expansion and confined to the
    sign-change bracket containing the n-th zero.
    """
    if int(m) != m or m < 0 or int(n) != n or n < 1:
        raise DomainError(f"bessel_j_zero needs integer m >= 0, n >= 1; got ({m}, {n})")
    m, n = int(m), int(n)
    lo, hi, flo = _bracket(m, n)
    x = _mcmahon(m, n)
    if not lo < x < hi:
        x = 0.5 * (lo + hi)
    for _ in range(100):
        j, jp = bessel_j_pair(m, x)
        if j == 0.0:
            return x
        if (j > 0) == (flo > 0):
            lo = x
        else:
            hi = x
        dx = j / jp if jp != 0 else math.inf
        x_new = x - dx
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 4e-16 * x or hi - lo <= 4e-16 * x:
            return x_new
        x = x_new
    raise ConvergenceError(f"Newton iteration for j_({m},{n}) did not converge in 100 steps")


def bessel_j_zeros(m: int, count: int) -> list[float]:
    return [bessel_j_zero(m, n) for n in range(1, count + 1)]


# --------------------------------------------------------------------------
# Confluent Heun functions


def _check_heun_b(p: HeunParams):
    if not p.heun_b_allowed():
        raise ParameterError(f"HeunB gamma must not be zero or a negative integer (gamma={p.gamma})")


def heun_b(p: HeunParams, z: complex):
    """Bi-confluent Heun function and its derivative, ``(y, y')``, with y(0) = 1."""
    _check_heun_b(p)
    try:
        y, yp, _, _ = _kernels.heun_b_series(*p.as_tuple(), complex(z))
    except ArithmeticError as exc:
        raise ConvergenceError(str(exc)) from exc
    return complex(y), complex(yp)


def heun_b_array(p: HeunParams, z):
    _check_heun_b(p)
    try:
        return _kernels.heun_b_series_array(*p.as_tuple(), z)
    except ArithmeticError as exc:
        raise ConvergenceError(str(exc)) from exc


def heun_b_residual(p: HeunParams, z: complex) -> float:
    """ODE residual of the series (y, y', y'') at z, scaled by max(1, |y|)."""
    _check_heun_b(p)
    q, a, g, d, e = p.as_tuple()
    z = complex(z)
    y, yp, ypp, _ = _kernels.heun_b_series(q, a, g, d, e, z)
    res = z * ypp + (g + d * z + e * z * z) * yp + (a * z - q) * y
    return abs(res) / max(1.0, abs(y))


def _check_heun_d_point(name, value):
    if not np.all(np.isreal(value)) or np.any(np.asarray(value, dtype=float) < HEUN_D_MIN_DISTANCE):
        raise SingularityError(f"HeunD {name} must be real and >= {HEUN_D_MIN_DISTANCE} (irregular singularity at 0)")


def heun_d(p: HeunParams, anchor: float, z: float):
    """Double-confluent Heun function ``(y, y')`` normalized by y(anchor)=1, y'(anchor)=0.

    Only the shape is meaningful; any other normalization differs by the
    free eigenfunction constant.
    """
    _check_heun_d_point("anchor", anchor)
    _check_heun_d_point("z", z)
    try:
        y, yp, _ = _kernels.ode2_march(2, *p.as_tuple(), float(anchor), 1.0, 0.0, float(z))
    except FloatingPointError as exc:
        raise StiffnessError(str(exc)) from exc
    except ArithmeticError as exc:
        raise ConvergenceError(str(exc)) from exc
    return complex(y), complex(yp)


def heun_d_array(p: HeunParams, anchor: float, z):
    _check_heun_d_point("anchor", anchor)
    z = np.asarray(z, dtype=np.float64)
    _check_heun_d_point("z", z)
    try:
        return _kernels.ode2_march_many(2, *p.as_tuple(), float(anchor), 1.0, 0.0, z)
    except FloatingPointError as exc:
        raise StiffnessError(str(exc)) from exc
    except ArithmeticError as exc:
        raise ConvergenceError(str(exc)) from exc
