import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GENERIC, pt
from natanzon.coordmap import build_map, potential_in_r, r_of_z, z_of_r
from natanzon.errors import DomainError
from natanzon.params import NatanzonParams, PTParams, pt_potential, pt_to_natanzon, validate_params


def test_validate_generic_and_pt():
    assert validate_params(GENERIC).valid
    assert validate_params(pt(4.0, 1.0)).valid
    assert validate_params(pt(4.0, 1.0)).scattering_ready


def test_negative_radicand_rejected():
    bad = NatanzonParams(f=1.0, h0=0.0, h1=-1.0, a=20.0, c0=1.0, c1=1.0)  # R(1/2) = -4
    assert not validate_params(bad).valid
    with pytest.raises(DomainError):
        build_map(bad)


def test_params_json_round_trip(tmp_path):
    path = tmp_path / "p.json"
    import json

    path.write_text(json.dumps(GENERIC.to_dict()))
    assert NatanzonParams.from_json(path) == GENERIC


@settings(max_examples=25, deadline=None)
@given(st.floats(1.5, 8.0), st.floats(0.0, 1.2), st.booleans())
def test_pt_potential_identity(A, B, shifted):
    if not A > B:
        return
    params = pt_to_natanzon(PTParams(A, B, shifted))
    cmap = build_map(params, 12.0, 400)
    r = np.linspace(0.3, 10.0, 40)
    assert np.allclose(potential_in_r(params, cmap, r), pt_potential(r, A, B, shifted), rtol=1e-8, atol=1e-8)


def test_pt_map_is_tanh_squared():
    params = pt(4.0, 1.0)
    cmap = build_map(params, 15.0, 500)
    assert np.max(np.abs(cmap.z_grid - np.tanh(cmap.r_grid) ** 2)) < 1e-10


def test_generic_map_solves_ode_and_inverts():
    cmap = build_map(GENERIC, 20.0, 1000)
    assert cmap.ode_residual() < 1e-8
    assert np.all(np.diff(cmap.z_grid) >= 0.0)
    r = np.array([0.5, 3.0, 8.0, 14.0])
    assert np.allclose(r_of_z(cmap, z_of_r(cmap, r)), r, rtol=1e-9)


def test_generic_potential_threshold():
    cmap = build_map(GENERIC, 30.0, 1000)
    assert abs(potential_in_r(GENERIC, cmap, 29.0) - GENERIC.threshold) < 1e-6


def test_closed_form_spot_values():
    assert pt_potential(1.0, 2.0, 1.0) == pytest.approx(-6.0 / np.cosh(1.0) ** 2, rel=1e-14)
    assert pt_potential(1.0, 2.0, 1.0) == pytest.approx(-2.5198460, abs=1e-7)
    v = pt_potential(0.5, 3.0, 2.0)
    assert v == pytest.approx(-12.0 / np.cosh(0.5) ** 2 + 2.0 / np.sinh(0.5) ** 2, rel=1e-14)
    assert v == pytest.approx(-2.0719840, abs=1e-7)
    cmap = build_map(pt(4.0, 1.0), 10.0, 500)
    assert z_of_r(cmap, 2.0) == pytest.approx(np.tanh(2.0) ** 2, abs=1e-10)
    assert z_of_r(cmap, 2.0) == pytest.approx(0.9293492, abs=1e-7)
