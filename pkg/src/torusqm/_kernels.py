"""Select the kernel backend at import time.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module is used. ``TORUSQM_BACKEND=python`` forces
the fallback (handy for benchmarks and parity tests).
"""
import os

from . import _pykernels as python_backend

try:
    from . import _ckernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and os.environ.get("TORUSQM_BACKEND", "").lower() != "python":
    active = compiled_backend
else:
    active = python_backend

BACKEND = active.BACKEND
bessel_jy = active.bessel_jy
bessel_jy_array = active.bessel_jy_array
heun_b_series = active.heun_b_series
heun_b_series_array = active.heun_b_series_array
ode2_march = active.ode2_march
ode2_march_many = active.ode2_march_many


def available_backends():
    out = {"python": python_backend}
    if compiled_backend is not None:
        out["cython"] = compiled_backend
    return out
