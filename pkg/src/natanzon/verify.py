"""Verification checks grouped into suites; shared by the CLI and the acceptance tests.

Each check returns a ``CheckResult`` holding the measured quantities next to
the tolerance it was judged against.
"""

from __future__ import annotations

import os
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import algebra, oracle, satellites, scattering
from .coordmap import build_map
from .params import NatanzonParams, PTParams, pt_potential, pt_to_natanzon
from .spectrum import bound_only, pt_energies, solve_spectrum
from .wavefun import eigenfunction

PT_SETS = ((5.5, 1.0, False), (4.5, 1.0, False), (4.0, 2.0, True), (2.0, 1.0, False))
GENERIC = NatanzonParams(f=30.0, h0=2.0, h1=-1.0, a=1.0, c0=1.0, c1=1.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    metrics: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "seconds": self.seconds, "metrics": self.metrics}


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def default_grid_n() -> int:
    return int(os.environ.get("NATANZON_GRID_N", "4000"))


def _pt_params(A, B, shifted):
    return pt_to_natanzon(PTParams(A, B, shifted))


@_timed
def check_pt_spectrum(tol: float = 1e-10, budget: float = 1.0) -> CheckResult:
    """General solver against the closed-form Poschl-Teller levels."""
    t0 = time.perf_counter()
    rows = []
    worst = 0.0
    for A, B, shifted in PT_SETS:
        got = [s.E for s in solve_spectrum(_pt_params(A, B, shifted))]
        want = pt_energies(A, B, shifted)
        err = max(abs(g - w) for g, w in zip(got, want)) if len(got) == len(want) else float("inf")
        worst = max(worst, err)
        rows.append({"A": A, "B": B, "shifted": shifted, "E": got, "closed_form": want, "max_abs_error": err})
    elapsed = time.perf_counter() - t0
    return CheckResult("pt_spectrum", worst <= tol and elapsed < budget,
                       {"sets": rows, "max_abs_error": worst, "tolerance": tol, "elapsed": elapsed, "budget": budget})


@_timed
def check_oracle_pt(n: int = 4000, r_max: float = 20.0, tol: float = 1e-4, budget: float = 30.0) -> CheckResult:
    """Grid oracle with Richardson extrapolation against the algebraic levels."""
    t0 = time.perf_counter()
    rows = []
    worst = 0.0
    for A, B, shifted in PT_SETS:
        states = bound_only(solve_spectrum(_pt_params(A, B, shifted)))
        E = np.array([s.E for s in states])
        problem = oracle.GridProblem.from_potential(lambda r, A=A, B=B, s=shifted: pt_potential(r, A, B, s), r_max, n)
        grid = oracle.grid_spectrum(problem, len(E))
        rel = np.abs(grid - E) / np.maximum(np.abs(E), 1.0)
        worst = max(worst, float(rel.max()))
        rows.append({"A": A, "B": B, "shifted": shifted, "solver": E.tolist(), "grid": grid.tolist(),
                     "rel_error": rel.tolist()})
    elapsed = time.perf_counter() - t0
    return CheckResult("oracle_pt", worst <= tol and elapsed < budget,
                       {"sets": rows, "max_rel_error": worst, "tolerance": tol, "elapsed": elapsed, "budget": budget})


@_timed
def check_generic_oracle(params: NatanzonParams = GENERIC, n: int = 4000, r_max: float = 20.0,
                         tol: float = 1e-3) -> CheckResult:
    """Solver against the grid for a parameter set without a closed form."""
    states = bound_only(solve_spectrum(params))
    if not states:
        return CheckResult("generic_oracle", False, {"message": "no bound states"})
    E = np.array([s.E for s in states])
    grid = oracle.grid_spectrum(oracle.problem_from_params(params, r_max, n), len(E))
    rel = np.abs(grid - E) / np.maximum(np.abs(E), 1.0)
    return CheckResult("generic_oracle", float(rel.max()) <= tol,
                       {"params": params.to_dict(), "solver": E.tolist(), "grid": grid.tolist(),
                        "max_rel_error": float(rel.max()), "tolerance": tol})


@_timed
def check_algebra_closure(tol: float = 1e-6, p: float = 1.5, m: float = 1.3, min_order: float = 6.0) -> CheckResult:
    """Commutators on a Gaussian bump, fine grid, plus the observed order on two coarse grids."""
    rows = []
    ok = True
    for label, params in (("pt_4_2_shifted", _pt_params(4.0, 2.0, True)), ("generic", GENERIC)):
        cmap = build_map(params, 20.0, default_grid_n())
        f = algebra.sector_function(cmap.r_grid, algebra.gaussian_test_function(cmap), m)
        r0pm, rpm = algebra.commutator_residuals(f, p, params, cmap)
        coarse = []
        for n in (150, 300):
            cm = build_map(params, 20.0, n)
            g = algebra.sector_function(cm.r_grid, algebra.gaussian_test_function(cm, 8.0, 0.3), m)
            coarse.append(algebra.commutator_residuals(g, p, params, cm)[1])
        order = float(np.log2(coarse[0] / coarse[1]))
        good = r0pm < tol and rpm < tol and order >= min_order
        ok &= good
        rows.append({"set": label, "res_0pm": r0pm, "res_pm": rpm, "coarse_residuals": coarse, "observed_order": order})
    return CheckResult("algebra_closure", ok, {"sets": rows, "tolerance": tol, "min_order": min_order})


@_timed
def check_casimir_hamiltonian(tol: float = 1e-6) -> CheckResult:
    """(Q - q) Psi = G (E - H) Psi for every PT bound state, and the sign of G."""
    rows = []
    worst = 0.0
    selected = set()
    for A, B, shifted in PT_SETS:
        params = _pt_params(A, B, shifted)
        cmap = build_map(params, 20.0, default_grid_n())
        for st in bound_only(solve_spectrum(params)):
            fn = eigenfunction(params, st, cmap)
            res = algebra.casimir_hamiltonian_residual(params, st, fn, cmap)
            arb = algebra.gauge_arbitration(params, st, cmap)
            selected.add(arb["selected"])
            worst = max(worst, res["relative"], arb["plus"]["relative"])
            rows.append({"A": A, "B": B, "nu": st.nu, "relative": res["relative"],
                         "probe_plus": arb["plus"]["relative"], "probe_minus": arb["minus"]["relative"]})
    ok = worst < tol and selected == {"+R/(4z)"}
    return CheckResult("casimir_hamiltonian", ok,
                       {"states": rows, "max_relative": worst, "tolerance": tol, "gauge": sorted(selected)})


@_timed
def check_pole_spectrum(A: float = 4.0, B: float = 1.0, tol: float = 1e-8) -> CheckResult:
    """Surviving poles of R_m match the bound spectrum."""
    m = (A - B + 1.0) / 2.0
    states = bound_only(solve_spectrum(_pt_params(A, B, False)))
    energies = [s.E for s in states]
    rep = scattering.find_bound_poles(m, energies=energies, box=(complex(-1, 0), complex(1, 2 * m + 4)))
    poles = sorted(rep["poles"], key=lambda p: p.lam.imag)
    lam = [p.lam.imag for p in poles]
    E = sorted(p.E for p in poles)
    loc = scattering.pole_localization_error(rep)
    expected = [2 * n + 1.0 for n in range(int(round(m)))]
    ok = (
        len(poles) == len(expected)
        and all(abs(a - b) < tol for a, b in zip(lam, expected))
        and all(p.confirmed for p in poles)
        and max(abs(a - b) for a, b in zip(E, sorted(energies))) < tol
        and loc < tol
        and any(abs(c["lambda_im"] - (2 * m + 1)) < 1e-12 for c in rep["cancelled"])
    )
    return CheckResult("pole_spectrum", ok, {
        "m": m, "poles": [p.to_dict() for p in poles], "cancelled": rep["cancelled"],
        "spectrum": energies, "localization_error": loc, "tolerance": tol,
    })


@_timed
def check_unitarity(tol: float = 1e-12, jost_tol: float = 1e-10) -> CheckResult:
    """|R_m| = 1 on the real axis and the Jost recursion against the closed form."""
    lams = np.linspace(0.1, 10.0, 100)
    worst = 0.0
    for m in (1, 2, 3):
        for lam in lams:
            worst = max(worst, abs(abs(scattering.reflection_coefficient(scattering.ScatterChannel(lam=lam), m)) - 1.0))
    rng = np.random.default_rng(7)
    jost = 0.0
    for _ in range(10):
        lam = float(rng.uniform(0.1, 10.0))
        m0 = float(rng.uniform(0.0, 2.0))
        ch = scattering.ScatterChannel(lam=lam, m0=m0)
        for k, (A_m, B_m) in enumerate(scattering.jost_recursion(ch, 6)):
            ref = scattering.reflection_coefficient(ch, m0 + k)
            jost = max(jost, abs(A_m / B_m - ref))
    return CheckResult("unitarity", worst <= tol and jost <= jost_tol,
                       {"max_unitarity_error": worst, "max_jost_error": jost, "tolerance": tol, "jost_tolerance": jost_tol})


@_timed
def check_ladder(tol_plus: float = 1e-5, tol_minus: float = 1e-6) -> CheckResult:
    """J+ Phi_0 = -beta Phi^(m+1) and J- Phi_0 = 0 for PT (4, 2) shifted."""
    params = _pt_params(4.0, 2.0, True)
    cmap = build_map(params, 20.0, default_grid_n())
    st = solve_spectrum(params)[0]
    plus = algebra.ladder_residual(params, st, cmap, 1)
    minus = algebra.ladder_residual(params, st, cmap, -1)
    c_plus, _ = algebra.ladder_coefficients(st)
    ok = plus["relative_error"] < tol_plus and minus["relative_error"] < tol_minus and abs(c_plus + 1.5) < 1e-12
    return CheckResult("ladder", ok, {"c_plus": c_plus, "plus_rel_error": plus["relative_error"],
                                      "minus_rel_error": minus["relative_error"],
                                      "tolerances": [tol_plus, tol_minus]})


@_timed
def check_satellite(tol: float = 1e-4, fit_tol: float = 1e-6) -> CheckResult:
    """Fit the laddered PT (4, 2) state and arbitrate the two energy relations."""
    params = _pt_params(4.0, 2.0, True)
    cmap = build_map(params, 20.0, default_grid_n())
    st = solve_spectrum(params)[0]
    fn = eigenfunction(params, st, cmap)
    laddered = algebra.apply_generator("Jplus", algebra.MSectorFunction(fn, st.m), st.p, params, cmap)
    fit = satellites.reconstruct_potential(laddered.radial)
    report = satellites.energy_arbitration(4.0, 2.0, 0, fit)
    matches = [k for k, v in report["candidates"].items() if v["matches"]]
    ok = (abs(fit["A"] - 5.0) < tol and abs(fit["B"] - 1.0) < tol and fit["residual"] < fit_tol and len(matches) >= 1)
    fit_out = {k: fit[k] for k in ("A", "B", "C", "B_roots", "origin_exponent", "residual", "window")}
    return CheckResult("satellite", ok, {"fit": fit_out, "arbitration": report, "matching_candidates": matches})


@_timed
def check_asymptotics(r: float = 15.0, tol_V: float = 1e-5, tol_coef: float = 1e-6) -> CheckResult:
    """Large-r limits of the potential and the generator coefficients for PT."""
    rows = []
    ok = True
    for A, B, shifted in PT_SETS:
        params = _pt_params(A, B, shifted)
        cmap = build_map(params, 20.0, default_grid_n())
        rep = scattering.asymptotic_checks(params, cmap, r)
        good = rep["potential_error"] < tol_V and rep["generator_max_error"] < tol_coef
        ok &= good
        rows.append({"A": A, "B": B, "shifted": shifted, "V": rep["potential"], "V_limit": rep["potential_limit"],
                     "potential_error": rep["potential_error"], "generator_max_error": rep["generator_max_error"]})
    pw = scattering.plane_wave_casimir(1.0, 2.0)
    return CheckResult("asymptotics", ok, {"sets": rows, "plane_wave": {"max_error": pw["max_error"]}})


@_timed
def check_pt_operator_forms(tol: float = 1e-10) -> CheckResult:
    """General generators and Casimir reduce to the closed Poschl-Teller forms."""
    params = _pt_params(5.5, 1.0, False)
    cmap = build_map(params, 20.0, default_grid_n())
    sl = slice(10, -10)
    z, w, r = cmap.z_grid[sl], cmap.w_grid[sl], cmap.r_grid[sl]
    worst = 0.0
    worst_alt = 0.0
    for p, m in ((3.25, 3.0), (1.5, 0.5), (0.0, 2.0)):
        for sign in (1, -1):
            d, c = algebra.generator_coefficients(params, z, w, p, m, sign)
            dp, cp = algebra.pt_generator_coefficients(r, p, m, sign)
            worst = max(worst, float(np.max(np.abs(d - dp))), float(np.max(np.abs(c - cp) / np.maximum(np.abs(cp), 1))))
        G, U = algebra.casimir_coefficients(params, z, w, p, m)
        Gp, Up = algebra.pt_casimir_coefficients(r, p, m)
        worst = max(worst, float(np.max(np.abs(G - Gp))), float(np.max(np.abs(U - Up) / np.maximum(np.abs(Up), 1))))
        _, Uq = algebra.pt_casimir_coefficients(r, p, m, variant="alternate")
        worst_alt = max(worst_alt, float(np.max(np.abs(U - Uq) / np.maximum(np.abs(Uq), 1))))
    return CheckResult("pt_operator_forms", worst < tol,
                       {"max_rel_error": worst, "alternate_casimir_max_rel_error": worst_alt, "tolerance": tol})


@_timed
def check_params_set(params: NatanzonParams, n: int | None = None, r_max: float = 20.0) -> CheckResult:
    """Per-parameter checks for a user-supplied set: solver vs grid, Casimir and closure."""
    n = n or default_grid_n()
    states = bound_only(solve_spectrum(params))
    metrics = {"params": params.to_dict(), "n_states": len(states)}
    if not states:
        return CheckResult("params_set", False, {**metrics, "message": "no bound states"})
    E = np.array([s.E for s in states])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", oracle.UnderResolvedWarning)
        grid = oracle.grid_spectrum(oracle.problem_from_params(params, r_max, n), len(E))
    rel = float(np.max(np.abs(grid - E) / np.maximum(np.abs(E), 1.0)))
    cmap = build_map(params, r_max, n)
    f = algebra.sector_function(cmap.r_grid, algebra.gaussian_test_function(cmap), states[0].m)
    r0pm, rpm = algebra.commutator_residuals(f, states[0].p, params, cmap)
    ch = []
    for st in states:
        fn = eigenfunction(params, st, cmap)
        ch.append(algebra.casimir_hamiltonian_residual(params, st, fn, cmap)["relative"])
    metrics.update({"solver": E.tolist(), "grid": grid.tolist(), "grid_rel_error": rel,
                    "commutators": [r0pm, rpm], "casimir_hamiltonian": ch})
    ok = rel < 1e-3 and max(r0pm, rpm) < 1e-6 and max(ch) < 1e-6
    return CheckResult("params_set", ok, metrics)


ACCEPTANCE = (
    ("1", check_pt_spectrum),
    ("2", check_oracle_pt),
    ("3", check_generic_oracle),
    ("4", check_algebra_closure),
    ("5", check_casimir_hamiltonian),
    ("6", check_pole_spectrum),
    ("7", check_unitarity),
    ("8", check_ladder),
    ("9", check_satellite),
    ("10", check_asymptotics),
)

SUITES = {
    "oracle": (check_pt_spectrum, check_oracle_pt, check_generic_oracle),
    "algebra": (check_algebra_closure, check_casimir_hamiltonian, check_ladder, check_pt_operator_forms),
    "scatter": (check_pole_spectrum, check_unitarity, check_asymptotics),
    "satellite": (check_satellite,),
}
SUITES["all"] = SUITES["oracle"] + SUITES["algebra"] + SUITES["scatter"] + SUITES["satellite"]


def run_suite(name: str = "all", params: NatanzonParams | None = None) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(name)
    results = [check() for check in SUITES[name]]
    if params is not None:
        results.append(check_params_set(params))
    return results
