"""Natanzon parameter model, the quadratic R(z) and the potential in the z variable.

Units are hbar = 2m = 1, so the Hamiltonian is H = -d^2/dr^2 + V(r).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError, SingularPotentialError

PARAM_KEYS = ("f", "h0", "h1", "a", "c0", "c1")


@dataclass(frozen=True)
class NatanzonParams:
    """The six Natanzon constants. ``tau`` and ``delta_disc`` are always derived."""

    f: float
    h0: float
    h1: float
    a: float
    c0: float
    c1: float

    @property
    def tau(self) -> float:
        return self.c1 - self.c0 - self.a

    @property
    def delta_disc(self) -> float:
        return self.tau**2 - 4.0 * self.a * self.c0

    @property
    def threshold(self) -> float:
        """Asymptotic value (h1 + 1)/c1 of the potential as r -> infinity."""
        return (self.h1 + 1.0) / self.c1

    def R(self, z):
        return self.a * z * z + self.tau * z + self.c0

    def dR(self, z):
        return 2.0 * self.a * z + self.tau

    def to_dict(self) -> dict:
        return {k: float(getattr(self, k)) for k in PARAM_KEYS}

    @classmethod
    def from_dict(cls, data: dict) -> "NatanzonParams":
        missing = [k for k in PARAM_KEYS if k not in data]
        if missing:
            raise ConfigError(f"parameter set is missing keys: {', '.join(missing)}")
        extra = sorted(set(data) - set(PARAM_KEYS))
        if extra:
            raise ConfigError(f"unknown parameter keys: {', '.join(extra)}")
        try:
            return cls(**{k: float(data[k]) for k in PARAM_KEYS})
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"non-numeric parameter value: {exc}") from None

    @classmethod
    def from_json(cls, path) -> "NatanzonParams":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read parameter file {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("parameter file must hold a JSON object")
        return cls.from_dict(data)


@dataclass(frozen=True)
class PTParams:
    """Poschl-Teller pair (A, B).

    ``shifted=False`` is V = -A(A+1) sech^2 r + B(B-1) csch^2 r; ``shifted=True``
    adds the constant (A - B)^2 so the continuum starts at (A - B)^2.
    """

    A: float
    B: float
    shifted: bool = False

    def __post_init__(self):
        if not self.A > self.B:
            raise DomainError(f"Poschl-Teller needs A > B for bound states (A={self.A}, B={self.B})")
        if self.B < 0:
            raise DomainError(f"Poschl-Teller needs B >= 0 (B={self.B})")


@dataclass
class Diagnostics:
    valid: bool
    r_positive: bool
    c1_positive: bool
    r_min: float
    r_min_at: float
    asymptotic_value: float
    scattering_ready: bool
    messages: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "r_positive": self.r_positive,
            "c1_positive": self.c1_positive,
            "r_min": self.r_min,
            "r_min_at": self.r_min_at,
            "asymptotic_value": self.asymptotic_value,
            "scattering_ready": self.scattering_ready,
            "messages": list(self.messages),
        }


def r_poly_eval(params: NatanzonParams, z):
    """Return ``(R(z), Delta)`` with R = a z^2 + tau z + c0 and Delta = tau^2 - 4 a c0."""
    return params.R(z), params.delta_disc


def _r_minimum(params: NatanzonParams):
    # minimum of the quadratic over the closed interval [0, 1]
    candidates = [0.0, 1.0]
    if params.a != 0.0:
        zv = -params.tau / (2.0 * params.a)
        if 0.0 < zv < 1.0:
            candidates.append(zv)
    vals = [params.R(z) for z in candidates]
    i = int(np.argmin(vals))
    return vals[i], candidates[i]


def validate_params(params: NatanzonParams) -> Diagnostics:
    """Check positivity of R on (0, 1) and c1 > 0; flag the scattering condition h1 = -1."""
    messages = []
    r_min, r_min_at = _r_minimum(params)
    # R may touch zero at z = 0 (c0 = 0) as long as it is positive just inside
    r_positive = True
    if r_min < 0.0 or (r_min == 0.0 and 0.0 < r_min_at < 1.0):
        r_positive = False
        messages.append(f"R(z) = {r_min:.6g} <= 0 at z = {r_min_at:.6g}")
    if params.c0 == 0.0 and (params.tau < 0.0 or (params.tau == 0.0 and params.a <= 0.0)):
        r_positive = False
        messages.append("R(z) is not positive just above z = 0")
    if params.c0 < 0.0:
        r_positive = False
    c1_positive = params.c1 > 0.0
    if not c1_positive:
        messages.append(f"c1 = {params.c1} must be positive for an asymptotic region")
    asym = params.threshold if c1_positive else float("nan")
    scattering_ready = params.h1 == -1.0
    if not scattering_ready:
        messages.append("scattering sector requires h1 = -1")
    return Diagnostics(
        valid=r_positive and c1_positive,
        r_positive=r_positive,
        c1_positive=c1_positive,
        r_min=float(r_min),
        r_min_at=float(r_min_at),
        asymptotic_value=float(asym),
        scattering_ready=scattering_ready,
        messages=messages,
    )


def potential_zw(params: NatanzonParams, z, w):
    """Potential with ``z`` and ``w = 1 - z`` supplied separately.

    Passing ``w`` independently keeps full relative precision near z = 1, where
    the coordinate map approaches one exponentially fast.
    """
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    R = params.R(z)
    if np.any(R <= 0.0):
        raise SingularPotentialError("R(z) <= 0 inside the evaluation range")
    f, h0, h1 = params.f, params.h0, params.h1
    first = (f * z * z - (h0 - h1 + f) * z + h0 + 1.0) / R
    # [a + (a + (c1 - c0)(2z - 1)) / (z(z - 1))] z^2 (1-z)^2 with z(z-1) cancelled
    zw = z * w
    bracket = params.a * zw * zw - (params.a + (params.c1 - params.c0) * (2.0 * z - 1.0)) * zw
    second = bracket / R**2 - 1.25 * params.delta_disc * zw * zw / R**3
    out = first + second
    return out if out.ndim else float(out)


def potential_in_z(params: NatanzonParams, z):
    """Natanzon potential V(z) for 0 < z < 1.

    Raises:
        DomainError: if any z lies outside the open interval (0, 1).
        SingularPotentialError: if R(z) <= 0.
    """
    za = np.asarray(z, dtype=float)
    if np.any((za <= 0.0) | (za >= 1.0)):
        raise DomainError("potential_in_z requires 0 < z < 1")
    return potential_zw(params, za, 1.0 - za)


def pt_to_natanzon(pt: PTParams) -> NatanzonParams:
    A, B = pt.A, pt.B
    h1 = (-A + B - 1.0) * (-A + B + 1.0) if pt.shifted else -1.0
    return NatanzonParams(
        f=(2.0 * A - 1.0) * (2.0 * A + 3.0) / 4.0,
        h0=(2.0 * B + 1.0) * (2.0 * B - 3.0) / 4.0,
        h1=h1,
        a=0.0,
        c0=0.0,
        c1=1.0,
    )


def pt_potential(r, A: float, B: float, shifted: bool = False):
    """Closed-form Poschl-Teller potential in r."""
    r = np.asarray(r, dtype=float)
    out = -A * (A + 1.0) / np.cosh(r) ** 2
    if B * (B - 1.0) != 0.0:
        out = out + B * (B - 1.0) / np.sinh(r) ** 2
    if shifted:
        out = out + (A - B) ** 2
    return out if out.ndim else float(out)
