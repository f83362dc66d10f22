"""Carrier-space eigenfunctions on the radial grid.

Three closed forms are available, all of the shape
``prefactor(z) * z^(beta/2) * (1-z)^(e/2) * 2F1(-nu, b; 1+beta; z)``:

``bare``      e = delta + 1, b = alpha - 1, no prefactor
``quartic``   the bare form times R(z)^(1/4)
``derived``   e = delta, b = alpha - nu, times R(z)^(1/4)

Only ``derived`` satisfies the Schrodinger equation in general. The ``auto``
choice tries the candidates in the order above and keeps the first whose
residual passes, and the verdict is stored in the function metadata.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import simpson

from . import oracle
from .coordmap import CoordinateMap, potential_in_r
from .errors import NonNormalizableError
from .params import NatanzonParams, potential_zw
from .specfun import gauss_2f1_terminating
from .spectrum import BoundState

FORMS = ("bare", "quartic", "derived")
RESIDUAL_TOL = 1e-5
DECAY_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class RadialFunction:
    r_grid: np.ndarray
    values: np.ndarray
    state: BoundState | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.r_grid.shape != self.values.shape:
            raise ValueError("r_grid and values must have the same length")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("radial function has non-finite values")

    def decays(self, tol: float = DECAY_TOL) -> bool:
        peak = float(np.max(np.abs(self.values)))
        return max(abs(self.values[0]), abs(self.values[-1])) < tol * peak

    def norm2(self) -> float:
        return float(simpson(self.values**2, x=self.r_grid))

    def scaled(self, c: float) -> "RadialFunction":
        return replace(self, values=c * self.values)

    def node_count(self, rel_floor: float = 1e-8) -> int:
        return count_nodes(self.values, rel_floor)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["r", "phi"])
            for r, v in zip(self.r_grid, self.values):
                writer.writerow([f"{r:.15g}", f"{v:.15g}"])


def count_nodes(values, rel_floor: float = 1e-8) -> int:
    """Sign changes among samples above ``rel_floor * max|values|``, ignoring the decayed tails."""
    v = np.asarray(values, dtype=float)
    keep = np.abs(v) > rel_floor * np.max(np.abs(v))
    s = np.sign(v[keep])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def carrier_values(params: NatanzonParams, alpha, beta, delta, nu: int, z, w, form: str = "derived"):
    """Evaluate one of the carrier forms at points given by ``z`` and ``w = 1 - z``."""
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    if form == "derived":
        e, b, quartic = delta, alpha - nu, True
    elif form == "bare":
        e, b, quartic = delta + 1.0, alpha - 1.0, False
    elif form == "quartic":
        e, b, quartic = delta + 1.0, alpha - 1.0, True
    else:
        raise ValueError(f"unknown carrier form {form!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.power(z, 0.5 * beta) * np.power(w, 0.5 * e)
        if quartic:
            out = out * np.power(params.R(z), 0.25)
    out = np.where(z <= 0.0, 0.0 if beta > 0 else out, out)
    return out * gauss_2f1_terminating(nu, b, 1.0 + beta, z)


def _raw(params, state, cmap, form):
    return carrier_values(params, state.alpha, state.beta, state.delta, state.nu, cmap.z_grid, cmap.w_grid, form)


def eigenfunction(params: NatanzonParams, state: BoundState, cmap: CoordinateMap, form: str = "auto") -> RadialFunction:
    """Carrier function of ``state`` sampled on the map grid, normalized when possible.

    With ``form="auto"`` the residual of every candidate is computed and recorded
    under ``meta["residuals"]``. The selected form is ``meta["form"]``.
    """
    V = grid_potential(params, cmap)
    forms = FORMS if form == "auto" else (form,)
    residuals = {}
    chosen = None
    for fm in forms:
        vals = _raw(params, state, cmap, fm)
        if not np.all(np.isfinite(vals)) or not np.any(vals):
            residuals[fm] = float("inf")
            continue
        residuals[fm] = oracle.residual(V, vals, state.E, r_grid=cmap.r_grid)
        if chosen is None and residuals[fm] < RESIDUAL_TOL:
            chosen = fm
    if chosen is None:
        chosen = min(residuals, key=residuals.get)
    vals = _raw(params, state, cmap, chosen)
    meta = {"form": chosen, "residuals": residuals, "passed": residuals[chosen] < RESIDUAL_TOL}
    fn = RadialFunction(r_grid=cmap.r_grid, values=vals, state=state, meta=meta)
    if not state.threshold:
        K, fn = normalize(fn)
        fn.meta["K"] = K
    return fn


def grid_potential(params: NatanzonParams, cmap: CoordinateMap) -> np.ndarray:
    """V on the map grid, with the singular origin node (c0 = 0) set to 0 (always excluded)."""
    z, w = cmap.z_grid, cmap.w_grid
    V = np.zeros_like(z)
    ok = z > 0.0
    V[ok] = potential_zw(params, z[ok], w[ok])
    return V


def _end_tail(r, v, sign):
    # exponential tail beyond one end: |v| ~ exp(-kappa * sign * r) continued past the last sample
    if v[-1] == 0.0:
        return 0.0
    if np.any(v == 0.0):
        return float("inf")
    kappa = -sign * np.polyfit(r, np.log(v), 1)[0]
    if kappa <= 0.0:
        return float("inf")
    return float(v[-1] ** 2 / (2.0 * kappa))


def tail_fraction(fn: RadialFunction, end: str = "both") -> float:
    """Estimated share of the norm lying beyond the grid, from the local decay rate at each end.

    Returns ``inf`` when the function is not decaying at an end.
    """
    n2 = fn.norm2()
    if n2 <= 0.0:
        return float("inf")
    total = 0.0
    if end in ("both", "right"):
        total += _end_tail(fn.r_grid[-6:], np.abs(fn.values[-6:]), +1)
    if end in ("both", "left"):
        total += _end_tail(fn.r_grid[5::-1], np.abs(fn.values[5::-1]), -1)
    return total / n2


def normalize(fn: RadialFunction, tail_tol: float = 1e-6):
    """Return ``(K, normalized)`` with the integral of |phi|^2 over the whole domain equal to one.

    The grid integral is corrected by the exponential tail estimates of ``tail_fraction``.

    Raises:
        NonNormalizableError: if the estimated tails beyond the grid exceed ``tail_tol``
            of the norm.
    """
    n2 = fn.norm2()
    if not n2 > 0.0:
        raise NonNormalizableError("zero function cannot be normalized")
    tail = tail_fraction(fn)
    if tail > tail_tol:
        raise NonNormalizableError(f"tail integral not converged on the grid (estimated fraction {tail:.3g})")
    K = 1.0 / np.sqrt(n2 * (1.0 + tail))
    out = replace(fn, values=K * fn.values, meta=dict(fn.meta))
    return float(K), out


def overlap(f: RadialFunction, g: RadialFunction) -> float:
    return float(simpson(f.values * g.values, x=f.r_grid))


def states_on_map(params, states, cmap, form="auto"):
    """Eigenfunctions for all non-threshold states."""
    return [eigenfunction(params, s, cmap, form) for s in states if not s.threshold]


__all__ = [
    "FORMS",
    "RadialFunction",
    "carrier_values",
    "count_nodes",
    "eigenfunction",
    "grid_potential",
    "normalize",
    "overlap",
    "tail_fraction",
    "potential_in_r",
    "states_on_map",
]
