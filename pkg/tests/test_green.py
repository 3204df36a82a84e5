import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from torusqm import green, specfun
from torusqm.coords import ToroidalPoint, TorusGeometry
from torusqm.errors import CoincidenceError, NonconvergedError


def pair(rng, ratio=0.5, R=1.0):
    w_hi = rng.uniform(0.1, 0.9) * R
    w_lo = w_hi * rng.uniform(0.05, ratio)
    return (ToroidalPoint(w_lo, rng.uniform(0, 6.28), rng.uniform(-6, 6)),
            ToroidalPoint(w_hi, rng.uniform(0, 6.28), rng.uniform(-6, 6)))


def test_distance_properties():
    a, b = ToroidalPoint(0.3, 0.2, 0), ToroidalPoint(0.5, 1.9, 4)
    assert green.cross_section_distance(a, b) == green.cross_section_distance(b, a)
    assert green.cross_section_distance(a, ToroidalPoint(0.3, 0.2, 9)) == 0


def test_series_symmetry(geom):
    rng = np.random.default_rng(1)
    for _ in range(20):
        a, b = pair(rng)
        assert abs(green.green_series(geom, a, b, 1.7).value) == pytest.approx(
            abs(green.green_series(geom, b, a, 1.7).value), rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(k=st.floats(0.2, 10), w_hi=st.floats(0.05, 5), r=st.floats(0.01, 0.5), du=st.floats(0, 2 * math.pi))
def test_graf_equivalence(k, w_hi, r, du):
    a, b = ToroidalPoint(w_hi * r, du, 0), ToroidalPoint(w_hi, 0, 0)
    s, _ = green.graf_sum(k, a, b)
    ref = specfun.hankel1(0, k * green.cross_section_distance(a, b))
    assert abs(s - ref) <= 1e-8 * abs(ref)


def test_nonconverged_for_equal_radii(geom):
    with pytest.raises(NonconvergedError):
        green.green_series(geom, ToroidalPoint(0.5, 0, 0), ToroidalPoint(0.5, 1.0, 0), 1.0)


def test_coincidence(geom):
    a = ToroidalPoint(0.5, 1.0, 0)
    with pytest.raises(CoincidenceError):
        green.green_closed(geom, a, ToroidalPoint(0.5, 1.0, 2.0), 1.0)
    with pytest.raises(CoincidenceError):
        green.green_series(geom, a, a, 1.0)


@pytest.mark.parametrize("m", range(0, 21, 4))
@pytest.mark.parametrize("x", [0.1, 1.0, 7.3, 50.0])
def test_radial_jump(m, x):
    rep = green.radial_green_jump(m, 2.0, x / 2.0)
    assert rep.difference <= 1e-10 * abs(rep.rhs)
    assert abs(rep.continuity) <= 1e-10 * max(abs(rep.lhs), abs(rep.rhs))


def test_jump_scaling():
    a = green.radial_green_jump(0, 1.0, 1.0)
    b = green.radial_green_jump(0, 1.0, 2.0)
    assert a.rhs == pytest.approx(2 * b.rhs) and a.difference <= 1e-12


def test_closed_form_log_singularity(geom):
    a = ToroidalPoint(0.4, 0.5, 0.0)
    c = math.cos(0.5)

    def both(eps):
        b = ToroidalPoint(0.4 + eps, 0.5, 0.0)
        rf = 1 / math.sqrt((1 + 0.4 * c) * (1 + (0.4 + eps) * c))
        return green.green_closed(geom, a, b, 1.0), -1 / 16 * (2j / math.pi) * math.log(eps) * rf

    (g1, l1), (g2, l2) = both(1e-4), both(1e-8)
    assert abs((g2 - g1) - (l2 - l1)) <= 1e-5


def test_closed_form_joint_v_shift(geom):
    a, b = ToroidalPoint(0.3, 0.1, 0.4), ToroidalPoint(0.7, 2.0, -1.0)
    a2, b2 = ToroidalPoint(0.3, 0.1, 0.4 + 2 * math.pi), ToroidalPoint(0.7, 2.0, -1.0 + 2 * math.pi)
    assert green.green_closed(geom, a2, b2, 1.2) == pytest.approx(green.green_closed(geom, a, b, 1.2), rel=1e-14)


def test_ratio_structure(geom):
    rng = np.random.default_rng(2)
    for _ in range(10):
        a, b = pair(rng)
        for k in (0.5, 3.0):
            r = green.green_series(geom, a, b, k).value / green.green_closed(geom, a, b, k)
            assert r == pytest.approx(-8j * math.pi * cmath.exp(1j * b.v), rel=1e-10)


def test_consistency_report(geom):
    rep = green.consistency_report(geom, 1.3, n_pairs=100, seed=4)
    assert rep.proportional and rep.variance < 1e-8
    assert rep.constant == pytest.approx(-8j * math.pi, rel=1e-10)
    assert rep.v_dependence_error < 1e-9
    other = green.consistency_report(geom, 4.0, n_pairs=20, seed=4)
    assert other.constant == pytest.approx(rep.constant, rel=1e-10)
    assert any("variance" in line for line in rep.lines())


def test_far_field_asymptotic(geom):
    f = ToroidalPoint(0.5, 0.3, 0.2)
    for kw, tol in ((100, 3e-3), (400, 1e-3)):
        s = ToroidalPoint(kw, 0.0, 0.1)
        series = green.green_series(geom, f, s, 1.0).value
        assert abs(green.green_farfield(geom, f, s, 1.0, variant="consistent") / series - 1) < tol
        printed = green.green_farfield(geom, f, s, 1.0)
        assert printed / series == pytest.approx((1 + 1j) / 2, abs=3 * tol)


def test_sommerfeld_outgoing(geom):
    src = ToroidalPoint(0.3, 0.0, 0.0)
    k, h = 2.0, 1e-4
    for w in (60.0, 120.0):
        g0 = green.green_series(geom, ToroidalPoint(w - h, 0.7, 0.0), src, k).value
        g1 = green.green_series(geom, ToroidalPoint(w + h, 0.7, 0.0), src, k).value
        dphase = cmath.phase(g1 / g0) / (2 * h)
        assert dphase == pytest.approx(k, abs=1e-3 * k)


def test_plane_wave(geom):
    rng = np.random.default_rng(6)
    for z in np.concatenate([[0.0, 50.0], rng.uniform(0, 50, 20)]):
        core, _ = green.jacobi_anger_core(float(z), 0.0)
        # truncation at ceil(z) + 25 leaves about J_{z+26}(z), which passes 1e-10 near z = 35
        assert abs(core - np.exp(1j * z)) <= (1e-10 if z <= 30 else 1e-8)
        th = rng.uniform(0, 2 * math.pi)
        core, _ = green.jacobi_anger_core(float(z), th)
        assert abs(abs(core) - 1) <= 1e-8
    r = green.plane_wave_series(geom, (1.3, 0.4, 0.9), ToroidalPoint(0.8, 2.0, 0.0))
    assert r.value / r.core == pytest.approx(-8j * math.pi * cmath.exp(-0.9j), rel=1e-15)
    with pytest.raises(NonconvergedError):
        green.plane_wave_series(geom, (30.0, 0.0, 0.0), ToroidalPoint(0.8, 1.0, 0.0), M_max=5)
