"""Exact separable solutions of the Helmholtz equation on toroidal coordinate systems.

Modules: ``coords`` (charts and metrics), ``specfun`` (Bessel, Hankel and
confluent Heun functions), ``wavefn`` (solution families), ``green`` (Green
function and plane-wave sums), ``verify`` (finite-difference and quadrature
oracles) and ``cli``.
"""
__version__ = "0.1.0"

from ._kernels import BACKEND  # noqa: E402,F401
