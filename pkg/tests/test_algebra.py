import numpy as np
import pytest

from natanzon import algebra
from natanzon.algebra import (apply_casimir, apply_generator, casimir_eigen_residual, casimir_hamiltonian_residual,
                              commutator_residuals, gauge_arbitration, gaussian_test_function, ladder_coefficients,
                              ladder_residual, pt_casimir_coefficients, pt_generator_coefficients, sector_function)
from natanzon.coordmap import build_map
from natanzon.errors import DenominatorError, DomainError, GridEdgeError
from natanzon.spectrum import make_state, solve_spectrum
from conftest import pt


def _bump(cmap, centre=8.0, width=0.6):
    return sector_function(cmap.r_grid, gaussian_test_function(cmap, centre, width), 1.3)


def test_commutators_on_generic(generic):
    params, cmap, _ = generic
    a, b = commutator_residuals(_bump(cmap), 1.5, params, cmap)
    assert a < 1e-6 and b < 1e-6


def test_commutators_of_zero():
    params = pt(4.0, 1.0)
    cmap = build_map(params, 20.0, 500)
    f = sector_function(cmap.r_grid, np.zeros_like(cmap.r_grid), 0.7)
    assert commutator_residuals(f, 1.0, params, cmap) == (0.0, 0.0)


def test_j0_and_weight_bookkeeping(pt41):
    params, cmap, _ = pt41
    f = _bump(cmap)
    assert np.array_equal(apply_generator("J0", f, 1.0, params, cmap).values, 1.3 * f.values)
    assert apply_generator("Jplus", f, 1.0, params, cmap).m == pytest.approx(2.3)
    assert apply_generator("Jminus", f, 1.0, params, cmap).m == pytest.approx(0.3)
    with pytest.raises(ValueError):
        apply_generator("Jz", f, 1.0, params, cmap)


def test_edge_guard(pt41):
    params, cmap, _ = pt41
    f = sector_function(cmap.r_grid, np.ones_like(cmap.r_grid), 1.0)
    with pytest.raises(GridEdgeError):
        apply_generator("Jplus", f, 1.0, params, cmap)


def test_composed_casimir_matches_direct(generic):
    params, cmap, _ = generic
    f = _bump(cmap)
    d = apply_casimir(f, 1.5, params, cmap).values
    c = apply_casimir(f, 1.5, params, cmap, method="composed").values
    assert np.max(np.abs(d - c)[10:-10]) < 1e-6 * np.max(np.abs(d))


def test_casimir_eigenvalue_on_states(generic):
    params, cmap, states = generic
    from natanzon.wavefun import eigenfunction

    for st in states:
        assert casimir_eigen_residual(params, st, eigenfunction(params, st, cmap), cmap) < 1e-6


def test_gauge_sign(generic):
    params, cmap, states = generic
    rep = gauge_arbitration(params, states[0], cmap)
    assert rep["selected"] == "+R/(4z)"
    assert rep["plus"]["relative"] < 1e-6 and rep["minus"]["relative"] > 1e-2


def test_hamiltonian_identity_off_shell(generic):
    params, cmap, states = generic
    res = casimir_hamiltonian_residual(params, states[1], gaussian_test_function(cmap, 6.0, 1.0), cmap)
    assert res["relative"] < 1e-6


def test_gauge_singular_at_origin(generic):
    with pytest.raises(DomainError):
        algebra.consistency_gauge(generic[0], np.array([0.0, 0.5]))


def test_ladder_coefficient_example():
    params = pt(5.5, 1.0)
    st = solve_spectrum(params)[1]
    assert (st.alpha, st.beta) == pytest.approx((6.0, 0.5))
    c_plus, c_minus = ladder_coefficients(st)
    assert c_minus == pytest.approx(-7.0 / 3.0, rel=1e-12)
    assert c_plus == pytest.approx(-0.5)


def test_ladder_coefficient_singular():
    params = pt(5.5, 1.0)
    st = solve_spectrum(params)[1]
    from dataclasses import replace

    with pytest.raises(DenominatorError):
        ladder_coefficients(replace(st, beta=-1.0))


def test_ladder_action_pt551():
    params = pt(5.5, 1.0)
    cmap = build_map(params, 20.0, 2000)
    st = solve_spectrum(params)[1]
    assert ladder_residual(params, st, cmap, +1)["relative_error"] < 1e-6
    assert ladder_residual(params, st, cmap, -1)["relative_error"] < 1e-6
    assert ladder_residual(params, st, cmap, -1, variant="alternate")["relative_error"] > 1e-2


def test_lowering_annihilates_ground_state(generic):
    params, cmap, states = generic
    res = ladder_residual(params, states[0], cmap, -1)
    assert res["coefficient"] == 0.0 and res["relative_error"] < 1e-6


def test_pt_closed_forms_match_general():
    params = pt(4.0, 1.0)
    cmap = build_map(params, 12.0, 1200)
    r = cmap.r_grid[50:-50]
    z, w = cmap.z_grid[50:-50], cmap.w_grid[50:-50]
    for sign in (1, -1):
        d, c = algebra.generator_coefficients(params, z, w, 2.5, 1.5, sign)
        dp, cp = pt_generator_coefficients(r, 2.5, 1.5, sign)
        assert np.allclose(d, dp, atol=1e-9) and np.allclose(c, cp, atol=1e-9)
    G, U = algebra.casimir_coefficients(params, z, w, 2.5, 1.5)
    Gp, Up = pt_casimir_coefficients(r, 2.5, 1.5)
    assert np.allclose(G, Gp, atol=1e-9) and np.allclose(U, Up, atol=1e-8)
    _, Up_alt = pt_casimir_coefficients(r, 2.5, 1.5, variant="alternate")
    assert np.max(np.abs(Up_alt - U)) > 1e-2


def test_group_params_match_pt_closed_form():
    from natanzon.spectrum import pt_group_params

    params = pt(4.0, 1.0)
    for st in solve_spectrum(params):
        p, m, q = pt_group_params(4.0, 1.0, st.nu)
        assert (st.p, st.m, st.q) == pytest.approx((p, m, q), abs=1e-12)
    assert make_state(params, -9.0, 0) == solve_spectrum(params)[0]
