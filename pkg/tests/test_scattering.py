import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import pt
from natanzon.coordmap import build_map
from natanzon.errors import GammaPoleError
from natanzon.scattering import (ScatterChannel, asymptotic_checks, find_bound_poles, jost_recursion,
                                 plane_wave_casimir, pole_lattice, pole_localization_error, reflection_coefficient,
                                 reflection_table, scaled_channel, write_reflection_csv)
from natanzon.spectrum import solve_spectrum


def test_closed_value_m1_lambda2():
    R = reflection_coefficient(ScatterChannel(lam=2.0), 1.0)
    assert R == pytest.approx(complex(-0.6, -0.8), abs=1e-14)


def test_jost_step_matches_closed_form():
    (A0, B0), (A1, B1) = jost_recursion(ScatterChannel(lam=2.0), 1)
    assert A1 / B1 == pytest.approx(complex(-0.6, -0.8), abs=1e-14)


def test_base_weight_returns_ratio0():
    ch = ScatterChannel(lam=1.7, ratio0=cmath.exp(0.3j))
    assert reflection_coefficient(ch, 0.0) == ch.ratio0


@settings(max_examples=60, deadline=None)
@given(st.floats(-30.0, 30.0), st.integers(1, 8))
def test_unitarity_on_real_axis(lam, m):
    assert abs(reflection_coefficient(ScatterChannel(lam=lam), float(m))) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 10.0), st.integers(1, 6))
def test_recursion_agrees_with_gamma_ratio(lam, m):
    steps = jost_recursion(ScatterChannel(lam=lam), m)
    A, B = steps[-1]
    assert A / B == pytest.approx(reflection_coefficient(ScatterChannel(lam=lam), float(m)), abs=1e-10)


def test_pole_argument_raises():
    with pytest.raises(GammaPoleError):
        reflection_coefficient(ScatterChannel(lam=1j), 2.0)


def test_lattice_cancellation():
    surviving, cancelled = pole_lattice(2.0, 0.0, 4)
    assert [n for _, n in surviving] == [0, 1]
    assert [n for _, n in cancelled] == [2, 3, 4]
    surviving, cancelled = pole_lattice(1.5, 0.0, 3)
    assert cancelled == [] and len(surviving) == 4


def test_pt41_poles_are_bound_states():
    params = pt(4.0, 1.0)
    energies = [s.E for s in solve_spectrum(params)]
    rep = find_bound_poles(2.0, energies=energies)
    assert [p.lam for p in rep["poles"]] == pytest.approx([1j, 3j], abs=1e-10)
    assert [p.E for p in rep["poles"]] == pytest.approx([-1.0, -9.0], abs=1e-10)
    assert [p.matched_nu for p in rep["poles"]] == [1, 0]
    assert all(p.confirmed and p.winding == 1 for p in rep["poles"])
    assert pole_localization_error(rep) < 1e-8
    assert rep["integer_sector"] and rep["note"] is None


def test_non_integer_sector_flagged():
    rep = find_bound_poles(1.5)
    assert not rep["integer_sector"] and rep["note"]


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 8.0), st.floats(0.3, 5.0), st.integers(1, 5))
def test_c1_scaling_keeps_r(lam, c1, m):
    base = ScatterChannel(lam=lam)
    other = scaled_channel(base, c1)
    assert other.wavenumber == pytest.approx(base.wavenumber / np.sqrt(c1))
    assert reflection_coefficient(other, float(m)) == pytest.approx(reflection_coefficient(base, float(m)), abs=1e-12)


@pytest.mark.parametrize("s", [0.5, 4.0])
def test_scaled_well_has_same_pole_lambdas(s):
    # (a, c0, c1) -> s (a, c0, c1) stretches r by sqrt(s) and divides V and E by s
    from dataclasses import replace

    params = pt(4.0, 1.0)
    scaled = replace(params, a=s * params.a, c0=s * params.c0, c1=s * params.c1)
    E1 = [st.E for st in solve_spectrum(params)]
    Es = [st.E for st in solve_spectrum(scaled)]
    assert Es == pytest.approx([e / s for e in E1], abs=1e-12)
    rep = find_bound_poles(2.0, channel=ScatterChannel(lam=0.0, c1=scaled.c1), energies=Es)
    assert [p.matched_nu for p in rep["poles"]] == [1, 0]
    cm1, cms = build_map(params, 10.0, 400), build_map(scaled, 10.0 * np.sqrt(s), 400)
    from natanzon.coordmap import potential_in_r

    r = np.linspace(0.5, 8.0, 9)
    assert np.allclose(potential_in_r(scaled, cms, r * np.sqrt(s)), potential_in_r(params, cm1, r) / s, atol=1e-9)


def test_plane_wave_casimir():
    out = plane_wave_casimir(2.0, 1.3)
    assert out["max_error"] < 1e-6 * abs(out["eigenvalue"])
    assert out["eigenvalue"] == pytest.approx((-1.3**2 - 1.0) / 4.0)


def test_asymptotic_limits(pt41):
    params, cmap, _ = pt41
    rep = asymptotic_checks(params, cmap)
    assert rep["potential_error"] < 1e-5
    assert rep["generator_max_error"] < 1e-6 and rep["p_independent"]


def test_reflection_csv(tmp_path):
    rows = reflection_table(ScatterChannel(lam=0.0), 2.0, np.linspace(0.0, 2.0, 3))
    path = tmp_path / "r.csv"
    write_reflection_csv(rows, path)
    text = path.read_text().splitlines()
    assert text[0] == "lambda,Re R,Im R,|R|" and len(text) == 4
