import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from torusqm import coords
from torusqm.coords import CartesianPoint, MoonSpencerPoint, ToroidalPoint, TorusGeometry
from torusqm.errors import DegenerateAxis

signs = st.sampled_from([1, -1])
angles = st.floats(-20, 20)


def close(c, xyz, tol=1e-12):
    return np.allclose(c.as_array(), xyz, rtol=tol, atol=tol)


def test_geometry_defaults_and_validation():
    g = TorusGeometry()
    assert (g.R, g.s_y, g.s_z, g.hbar, g.mass) == (1.0, 1, -1, 1.0, 0.5)
    assert g.energy(2.0) == 4.0 and g.wavenumber(4.0) == 2.0
    for bad in ({"R": 0}, {"s_y": 2}, {"s_z": 0}, {"hbar": -1}, {"mass": 0}):
        with pytest.raises(ValueError):
            TorusGeometry(**bad)


def test_point_storage():
    p = ToroidalPoint(1.0, 7.0, 9.0)
    assert p.u == pytest.approx(7.0 - 2 * math.pi) and p.v == 9.0
    with pytest.raises(ValueError):
        ToroidalPoint(-0.1, 0, 0)
    with pytest.raises(ValueError):
        MoonSpencerPoint(0.0, 0, 0)


def test_to_cartesian_examples():
    g = TorusGeometry(R=2, s_y=-1, s_z=1)
    assert close(coords.to_cartesian(g, ToroidalPoint(1, 0, 0)), (3, 0, 0))
    assert close(coords.to_cartesian(g, ToroidalPoint(1, math.pi / 2, math.pi / 2)), (0, -2, 1))
    assert close(coords.to_cartesian(TorusGeometry(), ToroidalPoint(0, 1.234, math.pi)), (-1, 0, 0))


def test_from_cartesian_examples():
    p = coords.from_cartesian(TorusGeometry(R=2), CartesianPoint(3, 0, 0))
    assert (p.w, p.u, p.v) == pytest.approx((1, 0, 0))
    with pytest.raises(DegenerateAxis):
        coords.from_cartesian(TorusGeometry(), CartesianPoint(0, 0, 1))
    p = coords.from_cartesian(TorusGeometry(), CartesianPoint(2, 0, -1))
    assert (p.w, p.u, p.v) == pytest.approx((math.sqrt(2), math.pi / 4, 0))


@settings(max_examples=2000, deadline=None)
@given(R=st.floats(0.1, 10), f=st.floats(0.01, 0.99), u=angles, v=angles, sy=signs, sz=signs)
def test_round_trip(R, f, u, v, sy, sz):
    g = TorusGeometry(R=R, s_y=sy, s_z=sz)
    c = coords.to_cartesian(g, ToroidalPoint(f * R, u, v))
    back = coords.to_cartesian(g, coords.from_cartesian(g, c))
    assert np.allclose(back.as_array(), c.as_array(), rtol=1e-12, atol=1e-12 * R)


@settings(max_examples=2000, deadline=None)
@given(R=st.floats(0.1, 10), f=st.floats(0, 3), u=angles, v=angles, sy=signs, sz=signs)
def test_double_covering(R, f, u, v, sy, sz):
    g = TorusGeometry(R=R, s_y=sy, s_z=sz)
    p = ToroidalPoint(f * R, u, v)
    q = coords.antipodal(g, p)
    assert q.v == pytest.approx(p.v + math.pi)
    scale = R * (1 + f)
    assert np.allclose(coords.to_cartesian(g, q).as_array(), coords.to_cartesian(g, p).as_array(),
                       atol=1e-12 * scale, rtol=0)
    twice = coords.antipodal(g, q)
    assert twice.w == pytest.approx(p.w, abs=1e-12 * scale)
    assert twice.v == pytest.approx(p.v + 2 * math.pi)
    if p.w > 1e-9 * R:
        assert math.cos(twice.u - p.u) == pytest.approx(1, abs=1e-10)


def test_antipodal_examples():
    g = TorusGeometry()
    q = coords.antipodal(g, ToroidalPoint(0.5, 0, 0))
    assert (q.w, q.u) == pytest.approx((2.5, math.pi))
    q = coords.antipodal(g, ToroidalPoint(0.5, math.pi, 0))
    assert (q.w, q.u) == pytest.approx((1.5, math.pi))
    assert close(coords.to_cartesian(g, q), (0.5, 0, 0))


def test_scale_factor_examples():
    s = coords.scale_factors(TorusGeometry(R=5), ToroidalPoint(2, 0, 0))
    assert (s.h_w, s.h_u, s.h_v, s.sqrt_g) == (1, 2, 7, 14)
    s = coords.scale_factors(TorusGeometry(), ToroidalPoint(1, math.pi, 0))
    assert s.h_v == 0 and s.sqrt_g == 0
    s = coords.scale_factors(TorusGeometry(), ToroidalPoint(0.3, math.pi / 3, 0))
    assert s.h_v == pytest.approx(1.15) and s.sqrt_g == pytest.approx(0.345)
    assert s.volume_weight == s.sqrt_g == pytest.approx(s.surface_weight)


def test_in_chart():
    g = TorusGeometry()
    assert coords.in_chart(g, ToroidalPoint(0.5, math.pi, 0))
    assert not coords.in_chart(g, ToroidalPoint(1.5, math.pi, 0))


def _tangents(g, w, u, v, h=1e-5):
    def X(a, b, c):
        return np.array(coords.cartesian_arrays(g, a, b, c))
    return [(X(w + h, u, v) - X(w - h, u, v)) / (2 * h),
            (X(w, u + h, v) - X(w, u - h, v)) / (2 * h),
            (X(w, u, v + h) - X(w, u, v - h)) / (2 * h)]


@settings(max_examples=300, deadline=None)
@given(R=st.floats(0.5, 5), f=st.floats(0.05, 0.95), u=angles, v=angles, sy=signs, sz=signs)
def test_orthogonality_and_jacobian(R, f, u, v, sy, sz):
    g = TorusGeometry(R=R, s_y=sy, s_z=sz)
    w = f * R
    tw, tu, tv = _tangents(g, w, u, v)
    s = coords.scale_factors(g, ToroidalPoint(w, u, v))
    scale = R * R
    for a, b in ((tw, tu), (tw, tv), (tu, tv)):
        assert abs(a @ b) <= 1e-8 * scale
    assert np.linalg.norm(tw) == pytest.approx(s.h_w, abs=1e-8 * R)
    assert np.linalg.norm(tu) == pytest.approx(s.h_u, abs=1e-8 * R)
    assert np.linalg.norm(tv) == pytest.approx(s.h_v, abs=1e-8 * R)
    assert abs(np.linalg.det(np.array([tw, tu, tv]))) == pytest.approx(s.sqrt_g, abs=1e-8 * scale)


def test_moon_spencer_examples():
    g = TorusGeometry()
    c = coords.moon_spencer_to_cartesian(g, MoonSpencerPoint(40.0, 0.0, 0.0))
    assert c.x == pytest.approx(1.0, abs=1e-12)
    c = coords.moon_spencer_to_cartesian(g, MoonSpencerPoint(1.0, math.pi, 0.0))
    assert c.x == pytest.approx(math.tanh(0.5)) and c.z == pytest.approx(0, abs=1e-15)
    c = coords.moon_spencer_to_cartesian(g, MoonSpencerPoint(1.0, math.pi / 2, math.pi / 2))
    assert close(c, (0, math.tanh(1), 1 / math.cosh(1)))


@settings(max_examples=500, deadline=None)
@given(R=st.floats(0.2, 5), tau=st.floats(0.05, 6), th=st.floats(-math.pi + 1e-6, math.pi), ph=st.floats(-3, 3))
def test_moon_spencer_round_trip(R, tau, th, ph):
    g = TorusGeometry(R=R)
    p = coords.cartesian_to_moon_spencer(g, coords.moon_spencer_to_cartesian(g, MoonSpencerPoint(tau, th, ph)))
    assert p.tau == pytest.approx(tau, rel=1e-9)
    assert math.cos(p.theta - th) == pytest.approx(1, abs=1e-10)
    assert math.cos(p.phi - ph) == pytest.approx(1, abs=1e-12)


def test_moon_spencer_from_toroidal_matches_cartesian():
    g = TorusGeometry(R=1.5, s_y=1, s_z=-1)
    rng = np.random.default_rng(3)
    w, u, v = rng.uniform(0.1, 1.2, 20), rng.uniform(0, 6.28, 20), rng.uniform(-3, 3, 20)
    tau, th, ph = coords.moon_spencer_from_toroidal_arrays(g, w, u, v)
    x1 = np.array(coords.moon_spencer_arrays(g, tau, th, ph))
    x2 = np.array(coords.cartesian_arrays(g, w, u, v))
    assert np.allclose(x1, x2, atol=1e-12)
