import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from torusqm import specfun
from torusqm.errors import DomainError, ParameterError, SingularityError
from torusqm.specfun import HeunParams

sp = pytest.importorskip("scipy.special")


# --- Bessel J, Y, H against an independent library -------------------------------

@settings(max_examples=500, deadline=None)
@given(nu=st.floats(0, 50), x=st.floats(1e-3, 200))
def test_bessel_j_against_oracle(nu, x):
    # relative error is unbounded at a zero of J, so near zeros the scale is the envelope sqrt(J^2 + Y^2)
    ref = sp.jv(nu, x)
    got = specfun.bessel_j(nu, x)
    envelope = math.hypot(ref, sp.yv(nu, x))
    assert abs(got - ref) <= max(1e-10 * abs(ref), 1e-12 * envelope)


@settings(max_examples=200, deadline=None)
@given(nu=st.floats(0, 30, allow_subnormal=False), x=st.floats(0.05, 200))
def test_bessel_y_against_oracle(nu, x):
    ref = sp.yv(nu, x)
    assert specfun.bessel_y(nu, x) == pytest.approx(ref, rel=1e-10, abs=1e-14)


def test_examples():
    assert specfun.bessel_j(0, 0.0) == 1.0
    assert specfun.bessel_j(0.5, math.pi / 2) == pytest.approx(2 / math.pi, rel=1e-15)
    assert abs(specfun.bessel_j(0, 2.404825557695773)) <= 1e-10


def test_negative_real_order():
    for nu in (-0.5, -0.3, -1.7, -2.0):
        assert specfun.bessel_j(nu, 1.3) == pytest.approx(sp.jv(nu, 1.3), rel=1e-12)


def test_domain_errors():
    with pytest.raises(DomainError):
        specfun.bessel_j(0, -1.0)
    with pytest.raises(DomainError):
        specfun.hankel1(0, 0.0)


def test_half_order_identity():
    x = np.linspace(1e-3, 50, 500)
    assert np.max(np.abs(specfun.bessel_j(0.5, x) * np.sqrt(np.pi * x / 2) - np.sin(x))) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(nu=st.floats(1, 40), x=st.floats(0.1, 100))
def test_recurrence(nu, x):
    lhs = specfun.bessel_j(nu - 1, x) + specfun.bessel_j(nu + 1, x)
    rhs = 2 * nu / x * specfun.bessel_j(nu, x)
    scale = max(abs(specfun.bessel_j(nu - 1, x)), abs(specfun.bessel_j(nu + 1, x)))
    assert abs(lhs - rhs) <= 1e-10 * scale + 1e-300


def test_wronskian():
    j, y, jp, yp = specfun.bessel_jy(3, 1.7)
    assert j * yp - jp * y == pytest.approx(2 / (math.pi * 1.7), rel=1e-10)


def _hankel_asymptotic_series(nu, x, terms=8):
    """Hankel's large-argument expansion of H1_nu(x) with ``terms`` corrections."""
    mu = 4 * nu * nu
    total, a = 1.0 + 0j, 1.0 + 0j
    for k in range(1, terms + 1):
        a *= (mu - (2 * k - 1) ** 2) / (k * 8 * x) * 1j
        total += a
    return math.sqrt(2 / (math.pi * x)) * cmath.exp(1j * (x - nu * math.pi / 2 - math.pi / 4)) * total


@pytest.mark.parametrize("x", [50.5, 80.0, 120.0, 199.0])
@pytest.mark.parametrize("nu", [0, 1, 2.5, 4])
def test_hankel_asymptotics(nu, x):
    h = specfun.hankel1(nu, x)
    assert abs(h / _hankel_asymptotic_series(nu, x) - 1) <= 1e-6
    lead = math.sqrt(2 / (math.pi * x)) * cmath.exp(1j * (x - nu * math.pi / 2 - math.pi / 4))
    assert abs(h / lead - 1) <= (abs(4 * nu * nu - 1) + 1) / (8 * x)


def test_asymptotic_branch_continuity():
    for nu in (0, 1, 3.5, 20):
        x = max(specfun.ASYMPTOTIC_X, nu * nu)
        from torusqm import _kernels
        steed = np.array(_kernels.bessel_jy(nu, x))
        asym = np.array(specfun._asymptotic_jy(nu, x))
        assert np.allclose(steed, asym, rtol=1e-11, atol=1e-14)
        assert specfun.bessel_j(nu, 2500.0) == pytest.approx(sp.jv(nu, 2500.0), rel=1e-10, abs=1e-14)


def test_hankel_modulus_limit():
    x = 1e5
    assert abs(specfun.hankel1(0, x)) * math.sqrt(math.pi * x / 2) == pytest.approx(1, abs=1e-5)


def test_hankel_is_j_plus_iy():
    h = specfun.hankel1(2.2, 3.1)
    assert h == pytest.approx(complex(sp.jv(2.2, 3.1), sp.yv(2.2, 3.1)), rel=1e-12)


def test_y0_small_argument():
    x = 1e-6
    assert specfun.bessel_y(0, x) == pytest.approx(2 / math.pi * (math.log(x / 2) + np.euler_gamma), rel=1e-9)


# --- zeros ------------------------------------------------------------------------

def test_zero_examples():
    assert specfun.bessel_j_zero(0, 1) == pytest.approx(2.404825557695773, abs=1e-10)
    assert specfun.bessel_j_zero(1, 1) == pytest.approx(3.8317059702, abs=1e-10)
    for n in (4, 5):
        z = specfun.bessel_j_zero(0, n)
        assert specfun.bessel_j(0, z - 1e-6) * specfun.bessel_j(0, z + 1e-6) < 0


@pytest.mark.parametrize("m", [0, 1, 2, 5, 13, 30, 50])
def test_zeros_against_oracle(m):
    assert np.allclose(specfun.bessel_j_zeros(m, 8), sp.jn_zeros(m, 8), atol=1e-10, rtol=0)


@pytest.mark.parametrize("m", range(0, 12))
def test_zeros_increase_and_interlace(m):
    a = specfun.bessel_j_zeros(m, 10)
    b = specfun.bessel_j_zeros(m + 1, 10)
    assert all(x < y for x, y in zip(a, a[1:]))
    assert all(a[i] < b[i] < a[i + 1] for i in range(9))


# --- HeunB -------------------------------------------------------------------------

def test_heun_b_normalization_and_slope():
    p = HeunParams(q=0.7, alpha=1.0, gamma=2.5, delta=0.3, epsilon=-0.2)
    y, yp = specfun.heun_b(p, 0.0)
    assert y == 1 and yp == pytest.approx(0.7 / 2.5)
    h = 1e-4
    fd = (specfun.heun_b(p, h)[0] - specfun.heun_b(p, -h)[0]) / (2 * h)
    assert fd == pytest.approx(0.7 / 2.5, rel=1e-7)


def _fd_residual(f, z, h=1e-3, kind=1, p=None):
    """Order-6 central-difference residual of the Heun ODE along the real direction."""
    c1 = np.array([-1, 9, -45, 0, 45, -9, 1]) / 60
    c2 = np.array([2, -27, 270, -490, 270, -27, 2]) / 180
    vals = np.array([f(z + k * h) for k in range(-3, 4)])
    d1, d2 = c1 @ vals / h, c2 @ vals / h**2
    q, a, g, d, e = p.as_tuple()
    A = z if kind == 1 else z * z
    return abs(A * d2 + (g + d * z + e * z * z) * d1 + (a * z - q) * vals[3])


def test_heun_b_example_residual():
    p = HeunParams(q=1, alpha=2, gamma=3, delta=-1, epsilon=0.5)
    assert specfun.heun_b_residual(p, 0.7) <= 1e-8
    assert _fd_residual(lambda z: specfun.heun_b(p, z)[0], 0.7, p=p) <= 1e-8


def test_heun_b_forbidden_gamma():
    for g in (0, -1, -4):
        with pytest.raises(ParameterError):
            specfun.heun_b(HeunParams(0, 0, g, 0, 0), 0.5)


cplx = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(q=cplx, a=cplx, d=cplx, e=cplx, g=st.floats(0.5, 3.0), r=st.floats(0, 5), t=st.floats(0, 2 * math.pi))
def test_heun_b_ode_residual_property(q, a, d, e, g, r, t):
    p = HeunParams(q, a, g, d, e)
    assert specfun.heun_b_residual(p, r * cmath.exp(1j * t)) <= 1e-8


def test_heun_b_series_agrees_with_integration():
    from torusqm import _kernels
    p = HeunParams(0.4 + 0.1j, 1.2, 2.0 + 0.5j, -0.7, 0.3j)
    y0, yp0 = specfun.heun_b(p, 0.5)
    y, yp, _ = _kernels.ode2_march(1, *p.as_tuple(), 0.5, y0, yp0, 4.0)
    ys, yps = specfun.heun_b(p, 4.0)
    assert abs(y - ys) <= 1e-10 * abs(ys) and abs(yp - yps) <= 1e-10 * abs(yps)


# --- HeunD -------------------------------------------------------------------------

PD = HeunParams(q=0.3, alpha=1, gamma=2j, delta=2, epsilon=-0.4j)


def test_heun_d_normalization():
    assert specfun.heun_d(PD, 1.0, 1.0) == (1, 0)


def test_heun_d_reversible():
    y, yp = specfun.heun_d(PD, 1.0, 4.0)
    from torusqm import _kernels
    yb, ypb, _ = _kernels.ode2_march(2, *PD.as_tuple(), 4.0, y, yp, 1.0)
    assert abs(yb - 1) <= 1e-10 and abs(ypb) <= 1e-10


def test_heun_d_residual_on_interval():
    for z in np.linspace(0.2, 5, 20):
        f = lambda t: specfun.heun_d(PD, 1.0, t)[0]
        assert _fd_residual(f, z, p=PD, kind=2) <= 1e-8


def test_heun_d_array_matches_scalar():
    z = np.array([0.3, 1.7, 0.9, 4.2])
    y, yp = specfun.heun_d_array(PD, 1.0, z)
    for i, t in enumerate(z):
        assert y[i] == pytest.approx(specfun.heun_d(PD, 1.0, t)[0], rel=1e-12)


def test_heun_d_singularity():
    with pytest.raises(SingularityError):
        specfun.heun_d(PD, 1.0, 1e-4)
    with pytest.raises(SingularityError):
        specfun.heun_d(PD, 5e-4, 1.0)
