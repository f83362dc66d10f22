import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import eigh_tridiagonal

from natanzon.oracle import (GridProblem, UnderResolvedWarning, grid_spectrum, raw_spectrum, residual,
                             tridiagonal_eigenvalues)
from natanzon.params import pt_potential


@settings(max_examples=30, deadline=None)
@given(st.integers(5, 60), st.integers(0, 10_000))
def test_sturm_matches_lapack(n, seed):
    rng = np.random.default_rng(seed)
    d = rng.normal(size=n) * 3.0
    e = rng.normal(size=n - 1)
    k = min(4, n)
    ours = tridiagonal_eigenvalues(d, e, k)
    ref = eigh_tridiagonal(d, e, eigvals_only=True)[:k]
    assert np.allclose(ours, ref, atol=1e-11 * max(1.0, np.abs(ref).max()))


def test_square_well():
    problem = GridProblem.from_potential(lambda r: np.zeros_like(r), math.pi, 400)
    E = grid_spectrum(problem, 3)
    assert np.allclose(E, [1.0, 4.0, 9.0], rtol=1e-8)


def test_second_order_convergence():
    pot = lambda r: np.zeros_like(r)
    errs = [abs(raw_spectrum(GridProblem.from_potential(pot, math.pi, n), 1)[0] - 1.0) for n in (100, 200)]
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.02)


def test_sech_well_single_level():
    problem = GridProblem.from_potential(lambda r: pt_potential(r, 2.0, 1.0), 20.0, 2000)
    assert grid_spectrum(problem, 1)[0] == pytest.approx(-1.0, abs=1e-6)


def test_neumann_even_state():
    # -6 sech^2 on the half line with psi'(0) = 0 picks the even level E = -4
    problem = GridProblem.from_potential(lambda r: -6.0 / np.cosh(r) ** 2, 20.0, 2000, "neumann")
    assert grid_spectrum(problem, 1)[0] == pytest.approx(-4.0, abs=1e-6)


def test_under_resolved_warning():
    problem = GridProblem.from_potential(lambda r: pt_potential(r, 20.0, 1.0), 20.0, 40)
    with pytest.warns(UnderResolvedWarning):
        grid_spectrum(problem, 1)


def test_residual_detects_wrong_energy():
    r = np.linspace(0.0, 20.0, 4001)[1:]
    V = pt_potential(r, 2.0, 1.0)
    psi = np.sinh(r) / np.cosh(r) ** 2  # exact E = -1
    assert residual(V, psi, -1.0, r_grid=r) < 1e-6
    assert residual(V, psi, -1.01, r_grid=r) == pytest.approx(0.01 * np.max(psi) / np.max(psi), rel=0.05)


def test_bad_grid_rejected():
    from natanzon.errors import DomainError

    with pytest.raises(DomainError):
        GridProblem(np.array([0.0, 1.0, 3.0]), np.zeros(3), 3.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(DomainError):
            GridProblem.from_potential(lambda r: 1.0 / (r - r), 1.0, 10)
