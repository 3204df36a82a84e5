"""Independent correctness oracles.

Residuals are computed with sixth-order central differences and one
Richardson step (h, h/2), so nothing here reuses the analytic derivatives of
the functions being certified. Every sampler takes an explicit seed, which is
echoed in its report.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import green, specfun, wavefn
from .coords import TorusGeometry, chart_factor, sqrt_g
from .errors import StepError

DEFAULT_SEED = 20240917
DEFAULT_STEP = 1e-3

# sixth-order central stencils at offsets -3..3; integer weights, divided after summation
_D1 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0])
_D2 = np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0])
_OFFSETS = np.arange(-3, 4)


@dataclass(frozen=True)
class ResidualReport:
    max_abs: float
    max_rel: float
    mean_rel: float
    n_points: int
    n_skipped: int
    worst_point: tuple
    step: float
    seed: int | None = None
    label: str = ""

    def passed(self, tol: float) -> bool:
        return self.n_points > 0 and self.max_rel <= tol


@dataclass(frozen=True)
class QuadratureSpec:
    n_w: int = 64
    n_u: int = 64
    n_v: int = 64
    w_min: float = 0.0
    w_max: float = 1.0
    u_min: float = 0.0
    u_max: float = 2 * math.pi
    v_min: float = 0.0
    v_max: float = 2 * math.pi

    def __post_init__(self):
        if self.n_w < 2 or self.n_u < 4 or self.n_v < 4:
            raise ValueError("need n_w >= 2 and n_u, n_v >= 4")
        if not self.w_max > self.w_min >= 0:
            raise ValueError("need 0 <= w_min < w_max")


# ---------------------------------------------------------------------------
# finite differences


def _partials(f: Callable, base, axis: int, h: float):
    """First and second derivatives along ``axis`` at step h, order 6."""
    vals = []
    for o in _OFFSETS:
        args = list(base)
        args[axis] = args[axis] + o * h
        vals.append(f(*args))
    vals = np.asarray(vals)
    d1 = np.tensordot(_D1, vals, axes=1) / (60.0 * h)
    d2 = np.tensordot(_D2, vals, axes=1) / (180.0 * h * h)
    return d1, d2


def _richardson(f, base, axis, h):
    a1, a2 = _partials(f, base, axis, h)
    b1, b2 = _partials(f, base, axis, h / 2)
    return (64 * b1 - a1) / 63, (64 * b2 - a2) / 63, (a1, a2), (b1, b2)


def _tp_operator(g, w, u, d):
    """Apply the toroidal-poloidal Laplacian from partials d = {(axis, order): value}."""
    hv = chart_factor(g, w, u)
    return (d[0, 2] + (1.0 / w + np.cos(u) / hv) * d[0, 1] + d[1, 2] / w**2
            - np.sin(u) * d[1, 1] / (w * hv) + d[2, 2] / hv**2)


def _report(res, psi0, k, pts, h, seed, label, skip_floor=1e-12):
    mag = np.abs(psi0)
    scale = np.abs(k * k * psi0) if k != 0 else mag
    keep = mag >= skip_floor * (np.max(mag) if mag.size else 0.0)
    keep &= np.isfinite(res)
    if not np.any(keep):
        return ResidualReport(math.inf, math.inf, math.inf, 0, int(mag.size), (), h, seed, label)
    rel = np.abs(res[keep]) / np.maximum(scale[keep], 1e-300)
    i = int(np.argmax(rel))
    worst = tuple(float(np.asarray(c)[keep][i]) for c in pts)
    return ResidualReport(float(np.max(np.abs(res[keep]))), float(rel[i]), float(np.mean(rel)),
                          int(np.count_nonzero(keep)), int(mag.size - np.count_nonzero(keep)),
                          worst, h, seed, label)


def helmholtz_residual_tp(g: TorusGeometry, psi: Callable, w, u, v, k: float, V: Callable | None = None,
                          h: float = DEFAULT_STEP, v_drift: float = 0.0, step_tol: float = 1e-2):
    """Residual Laplacian(psi) + (k^2 + V) psi - i v_drift psi_v at arrays of points.

    ``psi(w, u, v)`` must accept arrays. ``v_drift`` adds the first-order
    toroidal term of a uniform axial magnetic field (q B0 / hbar).
    Raises StepError when the h and h/2 estimates disagree by more than
    ``step_tol`` relative to |k^2 psi|.
    """
    w, u, v = (np.asarray(a, dtype=float) for a in np.broadcast_arrays(w, u, v))
    if np.any(w < 5 * h) or np.any(chart_factor(g, w, u) < 5 * h):
        raise StepError("points must lie at least 5h from w = 0 and from the axis")
    base = (w, u, v)
    d, coarse, fine = {}, {}, {}
    for axis in range(3):
        d1, d2, a, b = _richardson(psi, base, axis, h)
        d[axis, 1], d[axis, 2] = d1, d2
        coarse[axis, 1], coarse[axis, 2] = a
        fine[axis, 1], fine[axis, 2] = b
    psi0 = psi(w, u, v)
    pot = k * k + (V(w, u) if V is not None else 0.0)

    def total(dd):
        return _tp_operator(g, w, u, dd) + pot * psi0 - 1j * v_drift * dd[2, 1]

    res = total(d)
    spread = np.abs(total(coarse) - total(fine))
    scale = np.abs(k * k * psi0) if k != 0 else np.abs(psi0)
    finite = np.isfinite(spread) & (scale > 0)
    if np.any(spread[finite] > step_tol * scale[finite]):
        raise StepError(f"Richardson estimates disagree; reduce h={h}")
    return res, psi0


def _ms_operator(g, tau, theta, d, psi0, k):
    D = np.cosh(tau) - np.cos(theta)
    sh = np.sinh(tau)
    a = sh / D
    a_tau = (np.cosh(tau) * D - sh * sh) / D**2
    a_theta = -sh * np.sin(theta) / D**2
    inner = (a * d[0, 2] + a_tau * d[0, 1] + a * d[1, 2] + a_theta * d[1, 1] + d[2, 2] / (D * sh))
    return D**3 / (g.R**2 * sh) * inner + k * k * psi0


def helmholtz_residual_ms(g: TorusGeometry, psi: Callable, tau, theta, phi, k: float,
                          h: float = DEFAULT_STEP):
    """Residual of the Moon-Spencer form of the Helmholtz operator for ``psi(tau, theta, phi)``."""
    tau, theta, phi = (np.asarray(a, dtype=float) for a in np.broadcast_arrays(tau, theta, phi))
    if np.any(tau < 5 * h):
        raise StepError("tau must be at least 5h")
    d = {}
    for axis in range(3):
        d1, d2, _, _ = _richardson(psi, (tau, theta, phi), axis, h)
        d[axis, 1], d[axis, 2] = d1, d2
    psi0 = psi(tau, theta, phi)
    return _ms_operator(g, tau, theta, d, psi0, k), psi0


# ---------------------------------------------------------------------------
# sampling


def sample_toroidal(g: TorusGeometry, n: int, seed: int = DEFAULT_SEED, w_lo: float = 0.2,
                    w_hi: float | None = None):
    """Seeded uniform points with w in [w_lo, w_hi], w_hi defaulting to 0.8 R."""
    rng = np.random.default_rng(seed)
    w_hi = 0.8 * g.R if w_hi is None else w_hi
    return (rng.uniform(w_lo, w_hi, n), rng.uniform(0, 2 * math.pi, n), rng.uniform(0, 2 * math.pi, n))


def sample_moon_spencer(n: int, seed: int = DEFAULT_SEED, tau_lo: float = 0.2, tau_hi: float = 3.0):
    rng = np.random.default_rng(seed)
    return (rng.uniform(tau_lo, tau_hi, n), rng.uniform(0, 2 * math.pi, n), rng.uniform(0, 2 * math.pi, n))


def state_residual(g: TorusGeometry, state, n: int = 100, seed: int = DEFAULT_SEED, h: float = DEFAULT_STEP,
                   w_lo: float = 0.2, w_hi: float | None = None, v_drift: float = 0.0,
                   use_potential: bool = True) -> ResidualReport:
    """Full-PDE residual of a toroidal-poloidal state at seeded random points."""
    pts = sample_toroidal(g, n, seed, w_lo, w_hi)

    def psi(w, u, v):
        return state.evaluate_arrays(g, w, u, v)

    V = (lambda w, u: state.potential(g, w, u)) if use_potential else None
    res, psi0 = helmholtz_residual_tp(g, psi, *pts, k=state.operator_k, V=V, h=h, v_drift=v_drift)
    return _report(res, psi0, state.operator_k, pts, h, seed, type(state).__name__)


def moon_spencer_residual(g: TorusGeometry, state: wavefn.MoonSpencer, n: int = 100, seed: int = DEFAULT_SEED,
                          h: float = DEFAULT_STEP) -> ResidualReport:
    pts = sample_moon_spencer(n, seed)

    def psi(tau, theta, phi):
        return state.evaluate_ms_arrays(g, tau, theta, phi)

    res, psi0 = helmholtz_residual_ms(g, psi, *pts, k=state.k, h=h)
    return _report(res, psi0, state.k, pts, h, seed, "MoonSpencer")


def magnetic_residual(g: TorusGeometry, state: wavefn.Magnetic, n: int = 100, seed: int = DEFAULT_SEED,
                      h: float = DEFAULT_STEP) -> ResidualReport:
    """Residual of -Laplacian(psi) + i (q B0 / hbar) psi_v = k^2 psi for a magnetic state."""
    return state_residual(g, state, n, seed, h, v_drift=state.charge * state.B0 / state.hbar,
                          use_potential=False)


# ---------------------------------------------------------------------------
# quadrature and monodromy


def quadrature(g: TorusGeometry, f: Callable, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Integral of f(w, u, v) sqrt(g) over the QuadratureSpec box; Gauss-Legendre in w, trapezoid in u and v."""
    x, wx = np.polynomial.legendre.leggauss(spec.n_w)
    half = 0.5 * (spec.w_max - spec.w_min)
    wn = spec.w_min + half * (x + 1.0)
    ww = half * wx
    un = spec.u_min + (spec.u_max - spec.u_min) * np.arange(spec.n_u) / spec.n_u
    vn = spec.v_min + (spec.v_max - spec.v_min) * np.arange(spec.n_v) / spec.n_v
    du = (spec.u_max - spec.u_min) / spec.n_u
    dv = (spec.v_max - spec.v_min) / spec.n_v
    W, U, V = np.meshgrid(wn, un, vn, indexing="ij")
    vals = np.asarray(f(W, U, V), dtype=float) * sqrt_g(g, W, U)
    return float(np.einsum("i,ijk->", ww, vals) * du * dv)


@dataclass(frozen=True)
class MonodromyReport:
    expected_2pi: complex
    max_err_2pi: float
    max_err_4pi: float
    n_points: int
    seed: int | None = None

    def passed(self, tol: float = 1e-12) -> bool:
        return self.max_err_2pi <= tol and self.max_err_4pi <= tol


def monodromy_check(g: TorusGeometry, state, n: int = 50, seed: int = DEFAULT_SEED) -> MonodromyReport:
    """Ratios psi(v + 2 pi)/psi(v) and psi(v + 4 pi)/psi(v) against the state's expected phase."""
    w, u, v = sample_toroidal(g, n, seed)
    p0 = state.evaluate_arrays(g, w, u, v)
    p2 = state.evaluate_arrays(g, w, u, v + 2 * math.pi)
    p4 = state.evaluate_arrays(g, w, u, v + 4 * math.pi)
    keep = np.abs(p0) > 1e-12 * np.max(np.abs(p0))
    expected = complex(state.monodromy)
    e2 = float(np.max(np.abs(p2[keep] / p0[keep] - expected)))
    e4 = float(np.max(np.abs(p4[keep] / p0[keep] - expected**2)))
    return MonodromyReport(expected, e2, e4, int(np.count_nonzero(keep)), seed)


# ---------------------------------------------------------------------------
# suites


@dataclass
class SuiteResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        return f"{self.name}: {'PASS' if self.passed else 'FAIL'} value={self.value:.6e} tol={self.tolerance:.1e} {self.detail}".rstrip()


@dataclass
class CorruptedPhase:
    """Free toroidal state with the v-exponent -i v/2 replaced by -i v/3 (negative control)."""

    m: int
    k: float

    def evaluate_arrays(self, g, w, u, v):
        base = wavefn.FreeToroidal(self.m, self.k).evaluate_arrays(g, w, u, v)
        return base * np.exp(-1j * np.asarray(v) * (1.0 / 3.0 - 0.5))

    def potential(self, g, w, u):
        return 0.0 * w

    @property
    def operator_k(self):
        return self.k


def _suite_moonspencer(seed):
    g = TorusGeometry()
    r = moon_spencer_residual(g, wavefn.MoonSpencer(k=1.7), seed=seed)
    return [SuiteResult("moonspencer.residual", r.passed(1e-6), r.max_rel, 1e-6, f"n={r.n_points}")]


def _suite_free(seed):
    g = TorusGeometry(R=2.0)
    out = []
    for m, k in ((0, 1.3), (2, 2.5)):
        r = state_residual(g, wavefn.FreeToroidal(m, k), seed=seed, w_hi=1.5)
        out.append(SuiteResult(f"free.residual[m={m}]", r.passed(1e-6), r.max_rel, 1e-6))
    bad = state_residual(g, CorruptedPhase(1, 1.3), seed=seed, w_hi=1.5)
    out.append(SuiteResult("free.negative_control", bad.max_rel >= 1e-2, bad.max_rel, 1e-2, "must exceed"))
    return out


def _suite_well(seed):
    g = TorusGeometry()
    k, _ = wavefn.well_eigenvalue(g, 0, 1, 1.0)
    out = [SuiteResult("well.k01", abs(k - 2.404825557695773) <= 1e-10, abs(k - 2.404825557695773), 1e-10)]
    s = wavefn.WellEigenstate(0, 1, 0.5, R=1.0)
    uu = np.linspace(0, 2 * math.pi, 17)
    grid = wavefn.density_grid(g, s, [0.5], uu, uu)
    dmax = float(np.nanmax(grid.columns["density"]))
    out.append(SuiteResult("well.shell_density", dmax <= 1e-12, dmax, 1e-12))
    return out


def phase_states(k: float = 1.3):
    p1 = wavefn.PotentialCase1Params(U1=0.3, U2=-0.5, V1=0.2, V2=0.5, T2=0.0)
    p2 = wavefn.PotentialCase2Params(V0=0.5, V1=0.3, V2=0.2, V3=0.1, V4=0.8)
    return [
        wavefn.FreeToroidal(1, k),
        wavefn.WellEigenstate(1, 2, 0.9),
        wavefn.Magnetic(1, k, charge=1.0, B0=0.2),
        wavefn.PotentialCase1(1, k, p1, branch=1),
        wavefn.PotentialCase1(1, k, p1, branch=2),
        wavefn.PotentialCase2(1, k, p2, branch=1),
        wavefn.PotentialCase2(1, k, p2, branch=2),
        wavefn.BesselCase2(1, k, V0=0.5, V2=0.3),
    ]


def _suite_phase(seed):
    g = TorusGeometry()
    worst = 0.0
    for s in phase_states():
        r = monodromy_check(g, s, seed=seed)
        if abs(r.expected_2pi + 1) > 1e-15:
            return [SuiteResult("phase.monodromy", False, abs(r.expected_2pi + 1), 1e-12, type(s).__name__)]
        worst = max(worst, r.max_err_2pi, r.max_err_4pi)
    return [SuiteResult("phase.monodromy", worst <= 1e-12, worst, 1e-12)]


HEUN_D_FLOOR = 1e-5


def heun_b_draws(n: int, seed: int):
    """Seeded HeunB parameter sets with |q|, |alpha|, |delta|, |epsilon| <= 1 and Re gamma in [0.5, 3]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        c = rng.uniform(-1, 1, (4, 2)) / math.sqrt(2)
        q, a, d, e = (complex(x, y) for x, y in c)
        gam = complex(rng.uniform(0.5, 3.0), rng.uniform(-0.5, 0.5))
        out.append(specfun.HeunParams(q, a, gam, d, e))
    return out


def _suite_heun(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for hp in heun_b_draws(50, seed):
        r = rng.uniform(0, 5, 8)
        t = rng.uniform(0, 2 * math.pi, 8)
        for z in r * np.exp(1j * t):
            worst = max(worst, specfun.heun_b_residual(hp, z))
    out = [SuiteResult("heun.heunb_ode", worst <= 1e-8, worst, 1e-8, "50 draws, |z|<=5")]
    g = TorusGeometry()
    p1 = wavefn.PotentialCase1Params(U1=0.3, U2=-0.5, V1=0.2, V2=0.5, T2=0.4)
    for branch in (1, 2):
        variant = "printed" if branch == 1 else "consistent"
        r = state_residual(g, wavefn.PotentialCase1(1, 1.3, p1, branch=branch, variant=variant), seed=seed)
        out.append(SuiteResult(f"heun.case1_pde[branch={branch},{variant}]", r.passed(1e-5), r.max_rel, 1e-5))
    p2 = wavefn.PotentialCase2Params(V0=0.5, V1=0.3, V2=0.2, V3=0.1, V4=0.8)
    for branch in (1, 2):
        variant = "consistent" if branch == 1 else "printed"
        r = state_residual(g, wavefn.PotentialCase2(1, 1.3, p2, branch=branch, variant=variant), seed=seed)
        out.append(SuiteResult(f"heun.case2_pde[branch={branch},{variant}]", r.passed(HEUN_D_FLOOR), r.max_rel,
                               HEUN_D_FLOOR))
    return out


# the mode sum converges like (w_< / w_>)^M, so pairs are drawn with a bounded radius ratio
RADIUS_RATIO = 0.5


def _suite_green(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for m in range(21):
        for x in rng.uniform(0.1, 50, 5):
            rep = green.radial_green_jump(m, 1.0, float(x))
            scale = abs(rep.rhs)
            worst = max(worst, rep.difference / scale, abs(rep.continuity) / max(abs(rep.lhs), scale))
    out = [SuiteResult("green.jump", worst <= 1e-10, worst, 1e-10, "m<=20, kw' in [0.1,50]")]
    from .coords import ToroidalPoint
    gworst = 0.0
    for _ in range(40):
        w2 = rng.uniform(0.1, 5.0)
        w1 = w2 * rng.uniform(0.05, RADIUS_RATIO)
        a = ToroidalPoint(w1, rng.uniform(0, 2 * math.pi), 0.0)
        b = ToroidalPoint(w2, rng.uniform(0, 2 * math.pi), 0.0)
        k = rng.uniform(0.5, 5.0)
        s, _ = green.graf_sum(k, a, b)
        ref = specfun.hankel1(0, k * green.cross_section_distance(a, b))
        gworst = max(gworst, abs(s - ref) / abs(ref))
    out.append(SuiteResult("green.graf", gworst <= 1e-8, gworst, 1e-8))
    return out


def _suite_planewave(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for z in np.concatenate([[0.0, 50.0], rng.uniform(0, 50, 30)]):
        th = rng.uniform(0, 2 * math.pi)
        core, _ = green.jacobi_anger_core(float(z), th)
        worst = max(worst, abs(core - np.exp(1j * z * math.cos(th))))
    out = [SuiteResult("planewave.jacobi_anger", worst <= 1e-8, worst, 1e-8, "z<=50")]
    rep = green.consistency_report(TorusGeometry(), 1.3, n_pairs=100, seed=seed)
    c = rep.constant
    out.append(SuiteResult("planewave.green_ratio_variance", rep.proportional, rep.variance, 1e-8,
                           f"constant={c.real:.17g}{c.imag:+.17g}i"))
    return out


def _suite_normalization(seed):
    g = TorusGeometry(R=2.0)
    s = wavefn.WellEigenstate(0, 1, 1.0, R=2.0)
    spec = QuadratureSpec(n_w=200, n_u=64, n_v=64, w_max=1.0)
    total = quadrature(g, lambda w, u, v: np.abs(s.evaluate_arrays(g, w, u, v)) ** 2, spec)
    out = [SuiteResult("normalization.well", abs(total - 1) <= 1e-8, abs(total - 1), 1e-8)]
    worst = 0.0
    for a, R in ((0.5, 1.0), (1.0, 2.0), (0.3, 3.0), (2.0, 5.0), (0.9, 1.0)):
        gg = TorusGeometry(R=R)
        vol = quadrature(gg, lambda w, u, v: np.ones_like(w), QuadratureSpec(n_w=8, n_u=16, n_v=8, w_max=a))
        worst = max(worst, abs(vol - 2 * math.pi**2 * R * a * a) / (2 * math.pi**2 * R * a * a))
    out.append(SuiteResult("normalization.pappus", worst <= 1e-10, worst, 1e-10))
    return out


SUITES = {
    "moonspencer": _suite_moonspencer,
    "free": _suite_free,
    "well": _suite_well,
    "phase": _suite_phase,
    "heun": _suite_heun,
    "green": _suite_green,
    "planewave": _suite_planewave,
    "normalization": _suite_normalization,
}


@dataclass
class SuiteRun:
    seed: int
    results: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def run_suite(name: str = "all", seed: int = DEFAULT_SEED) -> SuiteRun:
    """Run one named suite or all of them; results are deterministic for a given seed."""
    names = list(SUITES) if name == "all" else [name]
    for n in names:
        if n not in SUITES:
            raise KeyError(f"unknown suite {n!r}; choose from {', '.join(SUITES)} or 'all'")
    t0 = time.perf_counter()
    run = SuiteRun(seed)
    for n in names:
        run.results.extend(SUITES[n](seed))
    run.elapsed = time.perf_counter() - t0
    return run
