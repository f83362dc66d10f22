"""Numerical coordinate map z(r) solving dz/dr = 2 z (1 - z) / sqrt(R(z)).

The map is integrated in the logit variable y = log(z / (1 - z)), for which
dy/dr = 2 / sqrt(R(z)) is bounded, so both z and w = 1 - z keep full relative
precision near the ends of the interval.

When c0 = 0 the map starts at z(0) = 0 and the origin is singular; the first
stretch is seeded by inverting the exact quadrature r(u) with u = sqrt(z).
When c0 > 0 the map only reaches z = 0 as r -> -infinity (the potential lives
on the whole line), so the origin is fixed by anchoring z = 1/2 at ``r_center``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq
from scipy.special import expit

from . import _fd
from .errors import DomainError, IntegrationError, OutOfRangeError
from .params import NatanzonParams, potential_zw, validate_params

DEFAULT_R_MAX = 20.0
DEFAULT_N_POINTS = 4000


def flow(params: NatanzonParams, z, w):
    """F(z) = dz/dr and its first two z-derivatives, written in terms of z and w = 1 - z."""
    R = params.R(z)
    Rz = params.dR(z)
    sR = np.sqrt(R)
    zw = z * w
    if params.c0 == 0.0 and params.tau > 0.0:
        # R = z (a z + tau): cancel sqrt(z) so F is finite (zero) at z = 0
        F = 2.0 * np.sqrt(z) * w / np.sqrt(params.a * z + params.tau)
    else:
        F = 2.0 * zw / sR
    Fz = 2.0 * (w - z) / sR - zw * Rz / (R * sR)
    Fzz = (
        -4.0 / sR
        - 2.0 * (w - z) * Rz / (R * sR)
        + 1.5 * zw * Rz * Rz / (R * R * sR)
        - 2.0 * params.a * zw / (R * sR)
    )
    return F, Fz, Fzz


def coordinate_derivatives(params: NatanzonParams, z, w=None):
    """Return (z', z'', z''') from the ODE right side by the chain rule."""
    if w is None:
        w = 1.0 - np.asarray(z, dtype=float)
    F, Fz, Fzz = flow(params, z, w)
    return F, F * Fz, F * (Fz * Fz + F * Fzz)


def _stretched_grid(r_max: float, n: int, ratio: float = 0.9, width: float = 0.05):
    # spacing grows smoothly from (1 - ratio) h to h over the first ~width of the nodes
    xi = np.linspace(0.0, 1.0, n)
    shape = xi - ratio * width * (1.0 - np.exp(-xi / width))
    r = r_max * shape / shape[-1]
    r[0] = 0.0
    r[-1] = r_max
    return r


@dataclass(frozen=True, eq=False)
class CoordinateMap:
    """Tabulated monotone map z(r) on [0, r_max] with dense interpolation."""

    params: NatanzonParams
    r_grid: np.ndarray
    z_grid: np.ndarray
    w_grid: np.ndarray
    r_max: float
    origin: str  # "endpoint" (c0 = 0, z(0) = 0) or "anchored" (c0 > 0)
    r_center: float | None
    _solution: object = field(repr=False)
    _r_seed: float = field(repr=False, default=0.0)

    @property
    def n_points(self) -> int:
        return self.r_grid.size

    @property
    def dz_dr(self) -> np.ndarray:
        return coordinate_derivatives(self.params, self.z_grid, self.w_grid)[0]

    def derivatives(self):
        """(z', z'', z''') at the grid nodes."""
        return coordinate_derivatives(self.params, self.z_grid, self.w_grid)

    def zw(self, r):
        """Return ``(z, 1 - z)`` at radii ``r`` (scalar or array)."""
        r_arr = np.atleast_1d(np.asarray(r, dtype=float))
        tol = 1e-12 * max(1.0, self.r_max)
        if np.any(r_arr < -tol) or np.any(r_arr > self.r_max + tol):
            raise OutOfRangeError(f"r outside the tabulated range [0, {self.r_max}]")
        r_arr = np.clip(r_arr, 0.0, self.r_max)
        z = np.empty_like(r_arr)
        w = np.empty_like(r_arr)
        dense = r_arr >= self._r_seed
        if np.any(dense):
            y = np.atleast_1d(self._solution(r_arr[dense]))
            if y.ndim > 1:
                y = y[0]
            z[dense] = expit(y)
            w[dense] = expit(-y)
        for i in np.flatnonzero(~dense):
            z[i] = _z_near_origin(self.params, r_arr[i])
            w[i] = 1.0 - z[i]
        if np.ndim(r) == 0:
            return float(z[0]), float(w[0])
        return z, w

    def y_of_r(self, r):
        z, w = self.zw(r)
        return np.log(z) - np.log(w)

    def ode_residual(self) -> float:
        """max |dz/dr - 2z(1-z)/sqrt(R)| with dz/dr from a 9-point difference of the table."""
        dz = _fd.derivative(self.r_grid, self.z_grid, 1)
        return float(np.max(np.abs(dz - self.dz_dr)))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["r", "z", "dz/dr"])
            for row in zip(self.r_grid, self.z_grid, self.dz_dr):
                writer.writerow([f"{v:.15g}" for v in row])


def _r_of_u(params: NatanzonParams, u: float) -> float:
    # exact r(z) for c0 = 0 with z = u^2: dr = sqrt(a u^2 + tau) / (1 - u^2) du
    a, tau = params.a, params.tau
    val, _ = quad(lambda t: np.sqrt(a * t * t + tau) / (1.0 - t * t), 0.0, u, epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def _z_near_origin(params: NatanzonParams, r: float) -> float:
    if r <= 0.0:
        return 0.0
    u = brentq(lambda u: _r_of_u(params, u) - r, 0.0, 0.999, xtol=1e-18, rtol=1e-15)
    return u * u


def build_map(
    params: NatanzonParams,
    r_max: float = DEFAULT_R_MAX,
    n_points: int = DEFAULT_N_POINTS,
    *,
    r_center: float | None = None,
    rtol: float = 1e-13,
) -> CoordinateMap:
    """Integrate the coordinate ODE onto a grid of ``n_points`` radii in [0, r_max].

    Raises:
        DomainError: for invalid parameters, r_max <= 0 or n_points < 100.
        IntegrationError: if the integrator fails.
    """
    diag = validate_params(params)
    if not diag.valid:
        raise DomainError("invalid Natanzon parameters: " + "; ".join(diag.messages))
    if r_max <= 0.0:
        raise DomainError("r_max must be positive")
    if n_points < 100:
        raise DomainError("n_points must be at least 100")

    def rhs(_r, y):
        z = expit(y[0])
        R = params.R(z)
        if R <= 0.0:
            raise IntegrationError(f"R(z) reached {R} at z = {z}")
        return [2.0 / np.sqrt(R)]

    atol = rtol
    if params.c0 == 0.0:
        r_grid = _stretched_grid(r_max, n_points)
        r_seed = min(1e-3, 0.5 * r_grid[1]) if r_grid[1] > 0 else 1e-3
        z_seed = _z_near_origin(params, r_seed)
        y_seed = np.log(z_seed) - np.log1p(-z_seed)
        sol = solve_ivp(rhs, (r_seed, r_max), [y_seed], method="DOP853", rtol=rtol, atol=atol, dense_output=True)
        if not sol.success:
            raise IntegrationError(sol.message)
        dense = sol.sol
        origin = "endpoint"
        center = None
    else:
        r_grid = np.linspace(0.0, r_max, n_points)
        sc0, sc1 = np.sqrt(params.c0), np.sqrt(params.c1)
        # the right tail decays slowest (its plateau is the continuum edge), so give it two thirds
        center = r_max * sc0 / (sc0 + 2.0 * sc1) if r_center is None else float(r_center)
        if not 0.0 <= center <= r_max:
            raise DomainError("r_center must lie in [0, r_max]")
        pieces = []
        for end in (0.0, r_max):
            if end == center:
                continue
            s = solve_ivp(rhs, (center, end), [0.0], method="DOP853", rtol=rtol, atol=atol, dense_output=True)
            if not s.success:
                raise IntegrationError(s.message)
            pieces.append((min(center, end), max(center, end), s.sol))
        dense = _Piecewise(pieces)
        r_seed = 0.0
        origin = "anchored"

    cmap = CoordinateMap(
        params=params,
        r_grid=r_grid,
        z_grid=np.empty(0),
        w_grid=np.empty(0),
        r_max=float(r_max),
        origin=origin,
        r_center=center,
        _solution=dense,
        _r_seed=r_seed,
    )
    z, w = cmap.zw(r_grid)
    if params.c0 == 0.0:
        z[0], w[0] = 0.0, 1.0
    object.__setattr__(cmap, "z_grid", z)
    object.__setattr__(cmap, "w_grid", w)
    with np.errstate(divide="ignore"):
        y = np.log(z) - np.log(w)
    if np.any(np.diff(y) <= 0.0):
        raise IntegrationError("integrated map is not strictly increasing; grid too fine for double precision")
    return cmap


class _Piecewise:
    """Join the backward and forward dense outputs around an anchor."""

    def __init__(self, pieces):
        self.pieces = pieces

    def __call__(self, r):
        r = np.atleast_1d(r)
        out = np.empty_like(r, dtype=float)
        done = np.zeros(r.shape, dtype=bool)
        for lo, hi, sol in self.pieces:
            sel = (r >= lo) & (r <= hi) & ~done
            if np.any(sel):
                out[sel] = np.atleast_2d(sol(r[sel]))[0]
                done |= sel
        return out


def z_of_r(cmap: CoordinateMap, r):
    return cmap.zw(r)[0]


def r_of_z(cmap: CoordinateMap, z):
    """Invert the map by Newton iteration on y(r) = logit z, using dr/dy = sqrt(R)/2.

    Raises:
        OutOfRangeError: if ``z`` lies outside ``[z(0), z(r_max)]``.
    """
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    lo, hi = cmap.z_grid[0], cmap.z_grid[-1]
    if np.any(z_arr < lo) or np.any(z_arr > hi):
        raise OutOfRangeError(f"z outside the tabulated range [{lo}, {hi}]")
    params = cmap.params
    out = np.empty_like(z_arr)
    z_seed = cmap.zw(cmap._r_seed)[0] if cmap._r_seed > 0 else 0.0
    with np.errstate(divide="ignore"):
        y_grid = np.log(cmap.z_grid) - np.log(cmap.w_grid)
    finite = np.isfinite(y_grid)
    for i, zt in enumerate(z_arr):
        if cmap.origin == "endpoint" and zt <= z_seed:
            out[i] = _r_of_u(params, np.sqrt(zt)) if zt > 0 else 0.0
            continue
        yt = np.log(zt) - np.log1p(-zt)
        r = float(np.interp(yt, y_grid[finite], cmap.r_grid[finite]))
        for _ in range(20):
            zc, wc = cmap.zw(min(max(r, 0.0), cmap.r_max))
            step = (np.log(zc) - np.log(wc) - yt) * np.sqrt(params.R(zc)) / 2.0
            r -= step
            if abs(step) < 1e-15 * max(1.0, abs(r)):
                break
        out[i] = min(max(r, 0.0), cmap.r_max)
    return float(out[0]) if np.ndim(z) == 0 else out


def potential_in_r(params: NatanzonParams, cmap: CoordinateMap, r):
    """V(r) = V(z(r)), using the accurate complement 1 - z from the map."""
    z, w = cmap.zw(r)
    return potential_zw(params, z, w)
