import pytest

from natanzon.coordmap import build_map
from natanzon.params import NatanzonParams, PTParams, pt_to_natanzon
from natanzon.spectrum import solve_spectrum

# generic well with c0 > 0 and a > 0 (anchored map, scanned spectrum)
GENERIC = NatanzonParams(f=30.0, h0=2.0, h1=-1.0, a=1.0, c0=1.0, c1=1.0)


def pt(A, B, shifted=False):
    return pt_to_natanzon(PTParams(A, B, shifted))


@pytest.fixture(scope="session")
def pt42():
    params = pt(4.0, 2.0, True)
    cmap = build_map(params, 20.0, 2000)
    return params, cmap, solve_spectrum(params)


@pytest.fixture(scope="session")
def pt41():
    params = pt(4.0, 1.0)
    cmap = build_map(params, 20.0, 2000)
    return params, cmap, solve_spectrum(params)


@pytest.fixture(scope="session")
def generic():
    cmap = build_map(GENERIC, 20.0, 2000)
    return GENERIC, cmap, solve_spectrum(GENERIC)
