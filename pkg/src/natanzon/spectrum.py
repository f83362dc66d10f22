"""Bound-state spectrum from the quantization condition 2 nu + 1 = alpha - beta - delta.

The exponents are

    alpha = sqrt(-a E + f + 1),  beta = sqrt(-c0 E + h0 + 1),  delta = sqrt(-c1 E + h1 + 1)

with every root taken positive. Group parameters follow as p = (alpha + beta)/2,
m = (alpha - beta)/2 and q = (delta^2 - 1)/4.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit

from .errors import BranchAmbiguityError, DomainError, NegativeRadicandError
from .params import NatanzonParams, potential_zw, validate_params

THRESHOLD_TOL = 1e-10


@dataclass(frozen=True)
class BoundState:
    nu: int
    E: float
    alpha: float
    beta: float
    delta: float
    p: float
    q: float
    m: float
    threshold: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["threshold_flag"] = d.pop("threshold")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BoundState":
        keys = ("nu", "E", "alpha", "beta", "delta", "p", "q", "m")
        return cls(**{k: d[k] for k in keys}, threshold=bool(d.get("threshold_flag", False)))

    def invariant_residuals(self, params: NatanzonParams) -> dict:
        """Residuals of every BoundState invariant; all should be ~0."""
        return {
            "quantization": abs(2 * self.nu + 1 - (self.alpha - self.beta - self.delta)),
            "alpha": abs(self.alpha**2 - (-params.a * self.E + params.f + 1.0)),
            "beta": abs(self.beta**2 - (-params.c0 * self.E + params.h0 + 1.0)),
            "delta": abs(self.delta**2 - (-params.c1 * self.E + params.h1 + 1.0)),
            "p": abs(self.p - (self.alpha + self.beta) / 2),
            "m": abs(self.m - (self.alpha - self.beta) / 2),
            "q": abs(self.q - (self.delta**2 - 1.0) / 4),
            "j0": check_j0_consistency(self),
        }


def _radicands(params: NatanzonParams, E):
    return (
        -params.a * E + params.f + 1.0,
        -params.c0 * E + params.h0 + 1.0,
        -params.c1 * E + params.h1 + 1.0,
    )


def group_params_of(params: NatanzonParams, E: float, nu: int):
    """Exponents and group parameters ``(alpha, beta, delta, p, q, m)`` at energy E.

    Raises:
        NegativeRadicandError: if any of the three squares is negative.
    """
    ra, rb, rd = _radicands(params, E)
    for name, val in (("alpha", ra), ("beta", rb), ("delta", rd)):
        if val < -1e-14 * max(1.0, abs(E)):
            raise NegativeRadicandError(f"{name}^2 = {val:.6g} < 0 at E = {E:.6g}")
    alpha, beta, delta = (math.sqrt(max(v, 0.0)) for v in (ra, rb, rd))
    p = 0.5 * (alpha + beta)
    m = 0.5 * (alpha - beta)
    q = 0.25 * (delta * delta - 1.0)
    return alpha, beta, delta, p, q, m


def make_state(params: NatanzonParams, E: float, nu: int, threshold: bool = False) -> BoundState:
    alpha, beta, delta, p, q, m = group_params_of(params, E, nu)
    return BoundState(nu=int(nu), E=float(E), alpha=alpha, beta=beta, delta=delta, p=p, q=q, m=m, threshold=threshold)


def check_j0_consistency(state: BoundState) -> float:
    """|m - nu - 1/2 - sqrt(q + 1/4)|, zero for a state of the discrete series."""
    return abs(state.m - state.nu - 0.5 - math.sqrt(max(state.q + 0.25, 0.0)))


def _upper_energy(params: NatanzonParams) -> tuple[float, str]:
    # bound states sit below the right plateau, below the left plateau when c0 > 0,
    # and must keep alpha real
    limits = [(params.threshold, "right")]
    if params.c0 > 0.0:
        limits.append(((params.h0 + 1.0) / params.c0, "left"))
    if params.a > 0.0:
        limits.append(((params.f + 1.0) / params.a, "alpha"))
    return min(limits)


def potential_minimum(params: NatanzonParams, n: int = 20001) -> float:
    """Minimum of V over a logit-spaced scan of the open interval (0, 1)."""
    y = np.linspace(-40.0, 40.0, n)
    with np.errstate(all="ignore"):
        V = potential_zw(params, expit(y), expit(-y))
    V = V[np.isfinite(V)]
    return float(V.min())


def _g(params: NatanzonParams, E):
    ra, rb, rd = _radicands(params, E)
    return np.sqrt(np.maximum(ra, 0.0)) - np.sqrt(np.maximum(rb, 0.0)) - np.sqrt(np.maximum(rd, 0.0))


def solve_spectrum(params: NatanzonParams, *, n_scan: int = 4000, tol: float = 1e-13) -> list[BoundState]:
    """All bound states, ordered by nu, plus a trailing threshold state if one exists.

    For a = c0 = 0 both alpha and beta are energy independent, and the level is
    found in closed form from delta = alpha - beta - (2 nu + 1). Otherwise each
    level is bracketed on a scan in s = sqrt(E_top - E) (which resolves the
    square-root behaviour at the top) and refined with Brent's method.

    Raises:
        DomainError: for invalid parameters.
        BranchAmbiguityError: if some level has more than one root.
    """
    diag = validate_params(params)
    if not diag.valid:
        raise DomainError("invalid Natanzon parameters: " + "; ".join(diag.messages))
    if params.a == 0.0 and params.c0 == 0.0:
        return _solve_closed_form(params)

    E_top, which = _upper_energy(params)
    E_low = min(potential_minimum(params), E_top) - 1.0
    while _g(params, E_low) - 1.0 >= 0.0:
        E_low = E_top - 2.0 * (E_top - E_low)
    s = np.linspace(0.0, math.sqrt(E_top - E_low), n_scan)
    E_scan = E_top - s * s
    g_scan = _g(params, E_scan)
    states: list[BoundState] = []
    nu = 0
    while True:
        level = 2 * nu + 1
        h = g_scan - level
        sign_change = np.flatnonzero(np.sign(h[1:]) * np.sign(h[:-1]) < 0)
        at_top = abs(h[0]) < THRESHOLD_TOL
        if at_top and which == "right":
            sign_change = sign_change[sign_change > 0]
        if len(sign_change) > 1:
            roots = [float(E_scan[i]) for i in sign_change]
            raise BranchAmbiguityError(f"level nu={nu} has {len(sign_change)} roots near E = {roots}")
        if len(sign_change) == 1:
            i = int(sign_change[0])
            lo, hi = sorted((E_scan[i], E_scan[i + 1]))
            E = brentq(lambda e: float(_g(params, e)) - level, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps)
            states.append(make_state(params, E, nu))
        elif at_top and which == "right":
            states.append(make_state(params, E_top, nu, threshold=True))
            break
        else:
            break
        nu += 1
    _check_ordering(states)
    return states


def _solve_closed_form(params: NatanzonParams) -> list[BoundState]:
    alpha = math.sqrt(params.f + 1.0)
    beta = math.sqrt(params.h0 + 1.0) if params.h0 + 1.0 >= 0 else float("nan")
    if not math.isfinite(beta):
        raise NegativeRadicandError("beta^2 = h0 + 1 < 0")
    states = []
    nu = 0
    while True:
        delta = alpha - beta - (2 * nu + 1)
        if delta < -THRESHOLD_TOL:
            break
        threshold = abs(delta) <= THRESHOLD_TOL
        delta = 0.0 if threshold else delta
        E = (params.h1 + 1.0 - delta * delta) / params.c1
        states.append(
            BoundState(
                nu=nu, E=E, alpha=alpha, beta=beta, delta=delta,
                p=0.5 * (alpha + beta), q=0.25 * (delta * delta - 1.0), m=0.5 * (alpha - beta),
                threshold=threshold,
            )
        )
        if threshold:
            break
        nu += 1
    _check_ordering(states)
    return states


def _check_ordering(states):
    energies = [s.E for s in states]
    if any(b <= a for a, b in zip(energies, energies[1:])):
        raise BranchAmbiguityError(f"energies do not increase with nu: {energies}")


def bound_only(states):
    """Drop threshold-marginal states."""
    return [s for s in states if not s.threshold]


def pt_energies(A: float, B: float, shifted: bool = False) -> list[float]:
    """Closed-form Poschl-Teller levels for nu = 0 .. intpart((A - B)/2)."""
    nu_max = int(math.floor((A - B) / 2.0))
    if shifted:
        return [-4.0 * nu * (nu - A + B) for nu in range(nu_max + 1)]
    return [-((2.0 * nu - A + B) ** 2) for nu in range(nu_max + 1)]


def pt_group_params(A: float, B: float, nu: int) -> tuple[float, float, float]:
    """Closed-form (p, m, q) for Poschl-Teller."""
    return (A + B) / 2.0, (A - B + 1.0) / 2.0, (2 * nu + 1 - A + B) * (2 * nu - 1 - A + B) / 4.0
