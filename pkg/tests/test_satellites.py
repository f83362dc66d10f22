import numpy as np
import pytest

from natanzon import algebra, satellites
from natanzon.errors import DomainError, LowestWeightError, NodeInWindowError
from natanzon.satellites import (delta_invariance_energy, energy_arbitration, pt_satellite, reconstruct_potential,
                                 satellite_energy, shift_exponents, susy_comparison)
from natanzon.wavefun import RadialFunction, eigenfunction


def test_satellite_parameters():
    A_s, B_s, h1_s = pt_satellite(2.0, 1.0)
    assert (A_s, B_s) == (3.0, 0.0)  # csch^2 term vanishes
    assert pt_satellite(4.0, 2.0) == (5.0, 1.0, 15.0)
    with pytest.raises(DomainError):
        pt_satellite(3.0, 0.5)
    with pytest.raises(DomainError):
        pt_satellite(1.0, 1.0)


def test_constant_shift_relation_values():
    assert satellite_energy(4.0, 2.0, 0) == pytest.approx(-19.0)
    assert satellite_energy(4.0, 2.0, 1) == pytest.approx(-15.0)
    assert satellite_energy(2.0, 1.0, 0) == pytest.approx(-9.0)


def test_delta_invariance_value():
    # E + h1_s - h1 with h1 = (-A + B - 1)(-A + B + 1) = 3 for (4, 2)
    assert delta_invariance_energy(4.0, 2.0, 0) == pytest.approx(12.0)


def test_shift_exponents(pt42):
    params, cmap, states = pt42
    rec = shift_exponents(states[0], 1, (4.0, 2.0))
    assert (rec.alpha_s, rec.beta_s, rec.delta_s) == pytest.approx((states[0].alpha + 1, states[0].beta - 1,
                                                                    states[0].delta))
    assert rec.m_s == pytest.approx(states[0].m + 1) and rec.nu_s == pytest.approx(1.0)
    assert rec.to_dict()["A_s"] == 5.0
    with pytest.raises(LowestWeightError):
        shift_exponents(states[0], -1)


@pytest.fixture(scope="module")
def laddered(pt42):
    params, cmap, states = pt42
    st = states[0]
    fn = eigenfunction(params, st, cmap)
    return algebra.apply_generator("Jplus", algebra.MSectorFunction(fn, st.m), st.p, params, cmap).radial


def test_reconstruction_recovers_satellite(laddered):
    fit = reconstruct_potential(laddered)
    assert fit["A"] == pytest.approx(5.0, abs=1e-4)
    assert fit["B"] == pytest.approx(1.0, abs=1e-4)
    assert sorted(fit["B_roots"]) == pytest.approx([0.0, 1.0], abs=1e-4)
    assert fit["residual"] < 1e-6
    # the laddered state is level 1 of the satellite, so it has one node
    assert laddered.node_count() == 1


def test_energy_arbitration_selects_delta_invariance(laddered):
    fit = reconstruct_potential(laddered)
    rep = energy_arbitration(4.0, 2.0, 0, fit, n=2000)
    assert rep["selected"] == "delta_invariance"
    assert rep["oracle_E"] == pytest.approx(12.0, abs=1e-6)
    assert rep["fit_E"] == pytest.approx(12.0, abs=1e-3)
    assert not rep["candidates"]["constant_shift"]["matches"]


def test_node_in_window_raises(laddered):
    r = laddered.r_grid
    with pytest.raises(NodeInWindowError):
        reconstruct_potential(RadialFunction(r, np.sin(r)), window=(20, r.size - 20))


def test_susy_partner_moves_the_other_way():
    out = susy_comparison(4.0, 1.0)
    assert out["satellite"] == (5.0, 0.0) and out["susy_partner"] == (3.0, 2.0)
    assert len(out["susy_partner_levels"]) == len(out["parent_levels"]) - 1
