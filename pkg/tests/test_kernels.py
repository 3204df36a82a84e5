"""Compiled and pure-Python kernels must agree; both must reject bad input the same way."""
import numpy as np
import pytest

from torusqm import _kernels, _pykernels
from conftest import backends


def test_backend_selection():
    assert _kernels.BACKEND in _kernels.available_backends()
    assert "python" in _kernels.available_backends()


@pytest.mark.parametrize("nu", [0.0, 0.3, 1.0, 2.5, 7.0, 30.0])
@pytest.mark.parametrize("x", [1e-3, 0.4, 3.3, 27.0, 180.0])
def test_bessel_parity(kernels, nu, x):
    ref = np.array(_pykernels.bessel_jy(nu, x))
    got = np.array(kernels.bessel_jy(nu, x))
    assert np.allclose(got, ref, rtol=1e-13, atol=0)


def test_bessel_array_matches_scalar(kernels):
    x = np.linspace(0.1, 40, 17)
    arr = kernels.bessel_jy_array(2.0, x)
    for i, t in enumerate(x):
        assert np.allclose(arr[:, i], kernels.bessel_jy(2.0, t), rtol=1e-14)


def test_bessel_rejects_bad_input(kernels):
    with pytest.raises(ValueError):
        kernels.bessel_jy(-1.0, 1.0)
    with pytest.raises(ValueError):
        kernels.bessel_jy(1.0, 0.0)


PARAMS = (0.4 + 0.1j, 1.2, 2.0 + 0.5j, -0.7, 0.3j)


@pytest.mark.parametrize("z", [0.0, 0.5, 2 + 1j, -3.0, 4j])
def test_heun_b_parity(kernels, z):
    ref = np.array(_pykernels.heun_b_series(*PARAMS, z)[:3])
    got = np.array(kernels.heun_b_series(*PARAMS, z)[:3])
    assert np.allclose(got, ref, rtol=1e-13, atol=1e-15)


@pytest.mark.parametrize("kind", [1, 2])
def test_march_parity(kernels, kind):
    ref = _pykernels.ode2_march(kind, *PARAMS, 1.0, 1.0, 0.0, 3.0)
    got = kernels.ode2_march(kind, *PARAMS, 1.0, 1.0, 0.0, 3.0)
    assert np.allclose(got[:2], ref[:2], rtol=1e-12)


def test_march_many_parity(kernels):
    z = np.array([0.3, 0.9, 1.0, 2.5, 4.0])
    ref = _pykernels.ode2_march_many(2, *PARAMS, 1.0, 1.0, 0.0, z)
    got = kernels.ode2_march_many(2, *PARAMS, 1.0, 1.0, 0.0, z)
    assert np.allclose(got[0], ref[0], rtol=1e-12)
    assert np.allclose(got[1], ref[1], rtol=1e-12)
