"""so(2,1) generators and Casimir acting on a fixed m-sector.

Functions are Psi(r, phi) = exp(i m phi) Phi(r); phi is never discretized,
d/dphi is replaced by i m, so every operator reduces to a radial operator
``d(r) d/dr + c(r)`` (generators) or ``G(r) d^2/dr^2 + U(r)`` (Casimir).

Generators in the form used here (z' = dz/dr, w = 1 - z):

    J(+/-) = exp(+/- i phi) [ +/- sqrt(z)(z-1)/z' d/dr + m (1+z)/(2 sqrt z)
                              -/+ (1/2)(z-1) ((1 -/+ p)/sqrt z - z'' sqrt z / z'^2) ]

``variant="alternate"`` flips the sign of the last bracket. Both close the algebra, but only the first one annihilates
the lowest-weight state and reproduces the Casimir below through
J0(J0 - 1) - J+ J-.

Casimir, same conventions:

    Q = z w^2 / z'^2 d^2/dr^2 - m^2 w^2/(4z) + p m w (1+z)/(2z)
        + (w^2/4) [ z (2 z''' z' - 3 z''^2) / z'^4 - (p^2 - 1)/z ]

``variant="alternate"`` uses 3 z'' in place of 3 z''^2.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _fd
from .coordmap import CoordinateMap, coordinate_derivatives, flow
from .errors import DenominatorError, DomainError, GridEdgeError
from .params import NatanzonParams
from .spectrum import BoundState
from .wavefun import RadialFunction, carrier_values, grid_potential

EDGE_NODES = 2 * _fd.DEFAULT_HALF_WIDTH + 2
EDGE_TOL = 1e-6
GENERATORS = ("J0", "Jplus", "Jminus")


@dataclass(frozen=True, eq=False)
class MSectorFunction:
    radial: RadialFunction
    m: float

    @property
    def values(self) -> np.ndarray:
        return self.radial.values

    @property
    def r_grid(self) -> np.ndarray:
        return self.radial.r_grid

    def with_values(self, values, m) -> "MSectorFunction":
        return MSectorFunction(replace(self.radial, values=np.asarray(values, dtype=float), meta=dict(self.radial.meta)), m)


def sector_function(r_grid, values, m: float, state=None) -> MSectorFunction:
    return MSectorFunction(RadialFunction(np.asarray(r_grid, float), np.asarray(values, float), state), float(m))


def _sqrt_R_over_z(params: NatanzonParams, z):
    if params.c0 == 0.0:
        return np.sqrt(params.a * z + params.tau)
    return np.sqrt(params.R(z) / z)


def generator_coefficients(params: NatanzonParams, z, w, p: float, m: float, sign: int, variant: str = "standard"):
    """Return ``(d, c)`` such that J(sign) acts on the m-sector as ``d f' + c f``.

    Nodes with z = 0 get ``c = 0`` (the functions vanish there and the node is
    never used in residual norms).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if variant not in ("standard", "alternate"):
        raise ValueError(f"unknown generator variant {variant!r}")
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    inner = z > 0.0
    zs = np.where(inner, z, 1.0)
    sz = np.sqrt(zs)
    # sqrt(z)(z-1)/z' = -sqrt(R)/(2 sqrt z)
    A = -0.5 * _sqrt_R_over_z(params, zs)
    d = sign * A
    mu = m * (1.0 + zs) / (2.0 * sz)
    wX = (w - zs) / sz - sz * w * params.dR(zs) / (2.0 * params.R(zs))
    last = 0.5 * w * (1.0 - sign * p) / sz - 0.5 * wX
    if variant == "alternate":
        last = -last
    c = mu + sign * last
    c = np.where(inner, c, 0.0)
    return np.broadcast_to(d, z.shape).copy(), c


def _check_edges(f: MSectorFunction):
    v = np.abs(f.values)
    peak = float(np.max(v)) if v.size else 0.0
    if peak == 0.0:
        return
    if max(v[0], v[-1]) > EDGE_TOL * peak:
        raise GridEdgeError("function is not negligible at the grid boundary")


def _zw(cmap: CoordinateMap, f: MSectorFunction):
    if f.r_grid is not cmap.r_grid and not np.array_equal(f.r_grid, cmap.r_grid):
        raise DomainError("function must be sampled on the coordinate map grid")
    return cmap.z_grid, cmap.w_grid


def apply_generator(which: str, f: MSectorFunction, p: float, params: NatanzonParams, cmap: CoordinateMap,
                    variant: str = "standard", check_edges: bool = True) -> MSectorFunction:
    """Apply J0, Jplus or Jminus; the result carries weight m, m + 1 or m - 1.

    Raises:
        GridEdgeError: if ``f`` is not negligible at the boundary nodes.
    """
    if which not in GENERATORS:
        raise ValueError(f"unknown generator {which!r}")
    if which == "J0":
        return f.with_values(f.m * f.values, f.m)
    if check_edges:
        _check_edges(f)
    z, w = _zw(cmap, f)
    sign = 1 if which == "Jplus" else -1
    d, c = generator_coefficients(params, z, w, p, f.m, sign, variant)
    df = _fd.derivative(f.r_grid, f.values, 1)
    out = d * df + c * f.values
    return f.with_values(out, f.m + sign)


def casimir_coefficients(params: NatanzonParams, z, w, p: float, m: float, variant: str = "standard"):
    """Return ``(G, U)`` with Q acting as ``G f'' + U f`` on the m-sector; zero where z = 0."""
    if variant not in ("standard", "alternate"):
        raise ValueError(f"unknown Casimir variant {variant!r}")
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    inner = z > 0.0
    zs = np.where(inner, z, 0.5)
    ws = np.where(inner, w, 0.5)
    G = params.R(zs) / (4.0 * zs)
    U = -m * m * ws * ws / (4.0 * zs) + p * m * ws * (1.0 + zs) / (2.0 * zs)
    if variant == "standard":
        F, Fz, Fzz = flow(params, zs, ws)
        tail = zs * (2.0 * Fzz / F - (Fz / F) ** 2)
    else:
        z1, z2, z3 = coordinate_derivatives(params, zs, ws)
        tail = zs * zs * (2.0 * z3 * z1 - 3.0 * z2) / (zs * z1**4)
    U = U + 0.25 * ws * ws * (tail - (p * p - 1.0) / zs)
    return np.where(inner, G, 0.0), np.where(inner, U, 0.0)


def apply_casimir(f: MSectorFunction, p: float, params: NatanzonParams, cmap: CoordinateMap,
                  method: str = "direct", variant: str = "standard", check_edges: bool = True) -> MSectorFunction:
    """Casimir on an m-sector function.

    ``method="direct"`` uses the closed form; ``method="composed"`` evaluates
    J0(J0 - 1) - J+ J- from the generators.
    """
    if check_edges:
        _check_edges(f)
    if method == "composed":
        jm = apply_generator("Jminus", f, p, params, cmap, variant, check_edges=False)
        jpjm = apply_generator("Jplus", jm, p, params, cmap, variant, check_edges=False)
        return f.with_values(f.m * (f.m - 1.0) * f.values - jpjm.values, f.m)
    if method != "direct":
        raise ValueError(f"unknown Casimir method {method!r}")
    z, w = _zw(cmap, f)
    G, U = casimir_coefficients(params, z, w, p, f.m, variant)
    d2 = _fd.derivative(f.r_grid, f.values, 2)
    return f.with_values(G * d2 + U * f.values, f.m)


def _interior(n: int, edge: int = EDGE_NODES) -> slice:
    return slice(edge, n - edge)


def _scaled_max(values, scale, sl) -> float:
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(values[sl])) / scale)


def commutator_residuals(f: MSectorFunction, p: float, params: NatanzonParams, cmap: CoordinateMap,
                         variant: str = "standard", edge: int = EDGE_NODES):
    """Max-norm residuals of ([J0, J+] - J+) f and ([J+, J-] + 2 J0) f relative to max|f|."""
    scale = float(np.max(np.abs(f.values)))
    if scale == 0.0:
        return 0.0, 0.0
    sl = _interior(f.values.size, edge)
    jp = apply_generator("Jplus", f, p, params, cmap, variant)
    j0f = apply_generator("J0", f, p, params, cmap, variant)
    j0jp = apply_generator("J0", jp, p, params, cmap, variant)
    jpj0 = apply_generator("Jplus", j0f, p, params, cmap, variant, check_edges=False)
    res_0pm = j0jp.values - jpj0.values - jp.values
    jm = apply_generator("Jminus", f, p, params, cmap, variant)
    jpjm = apply_generator("Jplus", jm, p, params, cmap, variant, check_edges=False)
    jmjp = apply_generator("Jminus", jp, p, params, cmap, variant, check_edges=False)
    res_pm = jpjm.values - jmjp.values + 2.0 * f.m * f.values
    return _scaled_max(res_0pm, scale, sl), _scaled_max(res_pm, scale, sl)


def ladder_coefficients(state: BoundState):
    """``(c_plus, c_minus)`` for the unnormalized carrier functions.

    Raises:
        DenominatorError: if beta = -1.
    """
    if 1.0 + state.beta == 0.0:
        raise DenominatorError("beta = -1 makes the lowering coefficient singular")
    nu = state.nu
    c_minus = -nu * (state.alpha - nu - 1.0 - state.beta) / (1.0 + state.beta)
    return -state.beta, float(c_minus) + 0.0


def shifted_carrier(params: NatanzonParams, state: BoundState, cmap: CoordinateMap, direction: int) -> np.ndarray:
    """Carrier with alpha +/- 1, beta -/+ 1, delta fixed and nu +/- 1 (unnormalized)."""
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    nu = state.nu + direction
    if nu < 0:
        return np.zeros_like(cmap.z_grid)
    return carrier_values(params, state.alpha + direction, state.beta - direction, state.delta, nu,
                          cmap.z_grid, cmap.w_grid, "derived")


def ladder_residual(params: NatanzonParams, state: BoundState, cmap: CoordinateMap, direction: int,
                    variant: str = "standard", edge: int = EDGE_NODES) -> dict:
    """Compare J(+/-) Phi_nu with c(+/-) Phi^(m +/- 1) pointwise (unnormalized carriers).

    The relative error is max|J Phi - c Phi'| / max|c Phi'|; when the predicted
    coefficient vanishes it is max|J Phi| / max|Phi| instead.
    """
    phi = carrier_values(params, state.alpha, state.beta, state.delta, state.nu, cmap.z_grid, cmap.w_grid, "derived")
    f = sector_function(cmap.r_grid, phi, state.m, state)
    which = "Jplus" if direction == 1 else "Jminus"
    out = apply_generator(which, f, state.p, params, cmap, variant, check_edges=False)
    c_plus, c_minus = ladder_coefficients(state)
    coef = c_plus if direction == 1 else c_minus
    target = coef * shifted_carrier(params, state, cmap, direction)
    sl = _interior(phi.size, edge)
    diff = out.values - target
    ref = float(np.max(np.abs(target[sl])))
    if ref > 0.0:
        rel = float(np.max(np.abs(diff[sl])) / ref)
    else:
        rel = float(np.max(np.abs(diff[sl])) / np.max(np.abs(phi[sl])))
    return {"direction": direction, "coefficient": coef, "relative_error": rel, "weight": out.m, "values": out.values}


def consistency_gauge(params: NatanzonParams, z):
    """Candidate G = R(z) / (4 z) from matching second-derivative coefficients.

    Raises:
        DomainError: at z <= 0, where the candidate is singular.
    """
    za = np.asarray(z, dtype=float)
    if np.any(za <= 0.0):
        raise DomainError("consistency gauge is singular at z = 0")
    out = params.R(za) / (4.0 * za)
    return out if out.ndim else float(out)


def casimir_hamiltonian_residual(params: NatanzonParams, state: BoundState, fn, cmap: CoordinateMap,
                                 gauge_sign: float = 1.0, variant: str = "standard", edge: int = EDGE_NODES) -> dict:
    """max |(Q - q) Psi - G (E - H) Psi| with G = gauge_sign * R / (4 z).

    ``fn`` is a RadialFunction or a plain array on the map grid. The identity
    holds for any function, not only eigenfunctions, once (p, m, q, E) come
    from the same state. ``scale`` is max|G Psi| max(|E|, 1) over the
    same interior nodes.
    """
    values = fn.values if isinstance(fn, RadialFunction) else np.asarray(fn, dtype=float)
    f = sector_function(cmap.r_grid, values, state.m)
    Qf = apply_casimir(f, state.p, params, cmap, variant=variant, check_edges=False).values
    z = cmap.z_grid
    sl = _interior(z.size, edge)
    G = np.zeros_like(z)
    G[z > 0] = gauge_sign * consistency_gauge(params, z[z > 0])
    V = grid_potential(params, cmap)
    d2 = _fd.derivative(cmap.r_grid, values, 2)
    H_psi = -d2 + V * values
    lhs = Qf - state.q * values
    rhs = G * (state.E * values - H_psi)
    diff = np.abs(lhs - rhs)[sl]
    scale = float(np.max(np.abs(G * values)[sl]) * max(abs(state.E), 1.0))
    return {"max_abs": float(diff.max()), "scale": scale, "relative": float(diff.max() / scale)}


def gauge_arbitration(params, state, cmap, test_values=None) -> dict:
    """Decide the sign of the gauge candidate on a function that is not an eigenstate.

    On an eigenstate both sides vanish and any gauge passes, so the default probe
    is a Gaussian bump in the middle of the grid.
    """
    if test_values is None:
        test_values = gaussian_test_function(cmap)
    plus = casimir_hamiltonian_residual(params, state, test_values, cmap, +1.0)
    minus = casimir_hamiltonian_residual(params, state, test_values, cmap, -1.0)
    return {"plus": plus, "minus": minus, "selected": "+R/(4z)" if plus["relative"] <= minus["relative"] else "-R/(4z)"}


def casimir_eigen_residual(params, state: BoundState, fn: RadialFunction, cmap, method="direct", variant="standard",
                           edge: int = EDGE_NODES) -> float:
    """max |Q Phi - q Phi| / max|q Phi| (or / max|Phi| when q = 0) over interior nodes."""
    f = MSectorFunction(fn, state.m)
    Qf = apply_casimir(f, state.p, params, cmap, method=method, variant=variant, check_edges=False).values
    sl = _interior(fn.values.size, edge)
    ref = max(abs(state.q), 1.0) * float(np.max(np.abs(fn.values[sl])))
    return float(np.max(np.abs(Qf - state.q * fn.values)[sl]) / ref)


def pt_generator_coefficients(r, p: float, m: float, sign: int, variant: str = "standard"):
    """Closed-form Poschl-Teller generator coefficients ``(d, c)`` in terms of t = tanh r.

    The general generators reduce to a derivative coefficient of -/+ 1/2
    (``variant="standard"``); ``variant="alternate"`` uses +/- 1.
    """
    t = np.tanh(np.asarray(r, dtype=float))
    d = np.full_like(t, -0.5 * sign if variant == "standard" else float(sign))
    c = m * (1.0 + t * t) / (2.0 * t) + ((2.0 * p + sign) * t * t - 2.0 * p + sign) / (4.0 * t)
    return d, c


def pt_casimir_coefficients(r, p: float, m: float, variant: str = "standard"):
    """Closed-form Poschl-Teller Casimir ``(G, U)`` with t = tanh r.

    The general Casimir gives the m^2 coefficient (1 - t^2)^2/(4 t^2)
    (``variant="standard"``); ``variant="alternate"`` uses (1 - t^2)/(4 t^2).
    """
    t = np.tanh(np.asarray(r, dtype=float))
    t2 = t * t
    mm = (1.0 - t2) ** 2 if variant == "standard" else (1.0 - t2)
    U = (
        -m * m * mm / (4.0 * t2)
        + p * m * (1.0 - t2 * t2) / (2.0 * t2)
        + ((1.0 - 4.0 * p * p) * (1.0 + t2 * t2) + (8.0 * p * p - 6.0) * t2) / (16.0 * t2)
    )
    return np.full_like(t, 0.25), U


def gaussian_test_function(cmap: CoordinateMap, center: float | None = None, width: float | None = None) -> np.ndarray:
    """Smooth bump well inside the grid, used for closure checks."""
    r = cmap.r_grid
    center = 0.5 * cmap.r_max if center is None else center
    width = 0.05 * cmap.r_max if width is None else width
    return np.exp(-0.5 * ((r - center) / width) ** 2)
