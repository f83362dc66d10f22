import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import pt
from natanzon.coordmap import build_map
from natanzon.errors import NonNormalizableError
from natanzon.spectrum import solve_spectrum
from natanzon.wavefun import (RadialFunction, carrier_values, count_nodes, eigenfunction, normalize, overlap,
                              states_on_map, tail_fraction)


@pytest.fixture(scope="module")
def pt551():
    params = pt(5.5, 1.0)
    cmap = build_map(params, 20.0, 2000)
    states = solve_spectrum(params)
    return params, cmap, states, states_on_map(params, states, cmap)


def test_pt21_normalization_constant():
    # psi = sinh r / cosh^2 r has integral of psi^2 equal to 1/3
    params = pt(2.0, 1.0)
    cmap = build_map(params, 20.0, 2000)
    st = solve_spectrum(params)[0]
    fn = eigenfunction(params, st, cmap)
    assert fn.meta["form"] == "derived"
    raw = carrier_values(params, st.alpha, st.beta, st.delta, 0, cmap.z_grid, cmap.w_grid)
    expected = np.sinh(cmap.r_grid) / np.cosh(cmap.r_grid) ** 2
    scale = raw[len(raw) // 4] / expected[len(raw) // 4]
    assert np.allclose(raw, scale * expected, atol=1e-12)
    assert fn.meta["K"] * scale == pytest.approx(np.sqrt(3.0), rel=1e-9)


def test_derived_form_wins_and_others_fail(generic):
    params, cmap, states = generic
    for st in states:
        fn = eigenfunction(params, st, cmap)
        res = fn.meta["residuals"]
        assert fn.meta["form"] == "derived" and fn.meta["passed"]
        assert res["derived"] < 1e-6
        assert res["bare"] > 1e-2 and res["quartic"] > 1e-2


def test_node_counts_and_orthonormality(pt551):
    _, _, states, fns = pt551
    for st, fn in zip(states, fns):
        assert fn.node_count() == st.nu
        assert fn.norm2() * (1.0 + tail_fraction(fn)) == pytest.approx(1.0, abs=1e-10)
    for i in range(len(fns)):
        for j in range(i):
            assert abs(overlap(fns[i], fns[j])) < 1e-6


def test_threshold_state_not_normalized(pt42):
    params, cmap, states = pt42
    fn = eigenfunction(params, states[-1], cmap)
    assert states[-1].threshold and "K" not in fn.meta


def test_non_normalizable_raises():
    r = np.linspace(0.0, 10.0, 501)
    with pytest.raises(NonNormalizableError):
        normalize(RadialFunction(r, np.exp(-0.01 * r) * np.sin(r)))


def _bump(n=801):
    r = np.linspace(0.0, 20.0, n)
    return RadialFunction(r, r**2 * np.exp(-r))


def test_normalize_idempotent():
    _, fn = normalize(_bump())
    K2, fn2 = normalize(fn)
    assert K2 == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(fn2.values, fn.values)


@settings(max_examples=30, deadline=None)
@given(st.floats(1e-3, 1e3))
def test_normalize_homogeneous(c):
    K1, f1 = normalize(_bump())
    Kc, fc = normalize(_bump().scaled(c))
    assert Kc * c == pytest.approx(K1, rel=1e-12)
    assert np.allclose(f1.values, fc.values, rtol=1e-12, atol=1e-15)


def test_count_nodes_ignores_tails():
    r = np.linspace(0.0, 30.0, 3001)
    v = np.sin(r) * np.exp(-r)
    assert count_nodes(v) < count_nodes(np.sin(r))
    assert count_nodes(np.sin(np.linspace(0.1, 3.0 * np.pi - 0.1, 400))) == 2


def test_csv(tmp_path, pt551):
    fn = pt551[3][0]
    path = tmp_path / "phi.csv"
    fn.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "r,phi" and len(lines) == fn.r_grid.size + 1
