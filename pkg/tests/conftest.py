import math

import pytest

from torusqm import _kernels, _pykernels
from torusqm.coords import TorusGeometry


def backends():
    out = [_pykernels]
    try:
        from torusqm import _ckernels
        out.append(_ckernels)
    except ImportError:
        pass
    return out


@pytest.fixture(params=backends(), ids=lambda m: m.BACKEND)
def kernels(request):
    return request.param


@pytest.fixture
def geom():
    return TorusGeometry()


TWO_PI = 2 * math.pi
