"""Continuous-series scattering: reflection coefficient, Jost recursion and bound-state poles.

With j = -1/2 + i lambda/2 the Casimir eigenvalue is j(j+1) = -(1 + lambda^2)/4,
and the reflection coefficient between weights m0 and m is

    R_m = ratio0 * G(m + 1/2 - i l/2) G(m0 + 1/2 + i l/2) / (G(m + 1/2 + i l/2) G(m0 + 1/2 - i l/2))

(l = lambda, G = Gamma). The physical wavenumber is k = lambda / sqrt(c1).
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass

import numpy as np

from .algebra import generator_coefficients
from .coordmap import CoordinateMap, potential_in_r
from .errors import BreakdownError, GammaPoleError
from .params import NatanzonParams
from .specfun import ln_gamma

POLE_CONFIRM = 1e8


@dataclass(frozen=True)
class ScatterChannel:
    lam: complex
    m0: float = 0.0
    sigma: int = 0
    c1: float = 1.0
    ratio0: complex = 1.0 + 0.0j

    @property
    def j(self) -> complex:
        return -0.5 + 0.5j * self.lam

    @property
    def m(self) -> float:
        return self.m0 + self.sigma

    @property
    def casimir(self) -> complex:
        j = self.j
        return j * (j + 1.0)

    @property
    def wavenumber(self) -> complex:
        return self.lam / math.sqrt(self.c1)

    def at(self, lam) -> "ScatterChannel":
        return ScatterChannel(lam=complex(lam), m0=self.m0, sigma=self.sigma, c1=self.c1, ratio0=self.ratio0)


def _log_ratio(channel: ScatterChannel, m: float) -> complex:
    h = 0.5j * complex(channel.lam)
    num = ln_gamma(m + 0.5 - h) + ln_gamma(channel.m0 + 0.5 + h)
    den = ln_gamma(m + 0.5 + h) + ln_gamma(channel.m0 + 0.5 - h)
    return num - den


def reflection_coefficient(channel: ScatterChannel, m: float) -> complex:
    """R_m for the channel's lambda.

    Raises:
        GammaPoleError: when a numerator Gamma argument is a non-positive
            integer, carrying the offending argument; also when a denominator
            argument is, since the value is then zero or undetermined.
    """
    if m == channel.m0:
        return complex(channel.ratio0)
    return complex(channel.ratio0) * cmath.exp(_log_ratio(channel, m))


def jost_recursion(channel: ScatterChannel, n_steps: int, A0: complex = 1.0, B0: complex | None = None):
    """Step (A_m, B_m) from m0 upwards with the asymptotic raising generator.

    On the branch exp(-/+ i k r), J+ acts as
    exp(i phi) [m + 1/2 -/+ i lambda/2] and is matched to
    sqrt((m - j)(m + j + 1)) times the state at m + 1.

    Raises:
        BreakdownError: if the matching coefficient vanishes.
    """
    if B0 is None:
        B0 = A0 / complex(channel.ratio0)
    A, B = complex(A0), complex(B0)
    out = [(A, B)]
    j = channel.j
    h = 0.5j * complex(channel.lam)
    m = channel.m0
    for _ in range(int(n_steps)):
        norm = cmath.sqrt((m - j) * (m + j + 1.0))
        if abs(norm) < 1e-300:
            raise BreakdownError(f"raising coefficient vanishes at m = {m}")
        A = A * (m + 0.5 - h) / norm
        B = B * (m + 0.5 + h) / norm
        out.append((A, B))
        m += 1.0
    return out


@dataclass(frozen=True)
class Pole:
    lam: complex
    E: float
    n: int
    matched_nu: int | None
    confirmed: bool
    magnitude: float
    winding: int

    def to_dict(self) -> dict:
        return {
            "lambda_re": self.lam.real,
            "lambda_im": self.lam.imag,
            "E": self.E,
            "n": self.n,
            "matched_nu": self.matched_nu,
            "confirmed": self.confirmed,
            "winding": self.winding,
        }


def pole_lattice(m: float, m0: float = 0.0, n_max: int = 50):
    """Candidate poles of the numerator Gammas and which of them the denominators cancel.

    Returns ``(surviving, cancelled)`` lists of ``(lambda, n)`` pairs in the
    upper half plane; n labels the numerator argument m0 + 1/2 + i lambda/2 = -n.
    Cancellation requires a denominator argument m + 1/2 + i lambda/2 = -k at
    the same lambda, i.e. m - m0 integer and n >= m - m0.
    """
    surviving, cancelled = [], []
    shift = m - m0
    integer_shift = abs(shift - round(shift)) < 1e-12
    for n in range(n_max + 1):
        lam = 1j * (2.0 * (n + m0) + 1.0)
        if lam.imag <= 0.0:
            continue
        if integer_shift and n >= round(shift):
            cancelled.append((lam, n))
        else:
            surviving.append((lam, n))
    return surviving, cancelled


def _winding(channel: ScatterChannel, m: float, centre: complex, radius: float, n: int = 64) -> int:
    # argument principle: 1/R winds +1 around a simple pole of R
    t = np.linspace(0.0, 2.0 * np.pi, n + 1)
    pts = centre + radius * np.exp(1j * t)
    args = np.array([cmath.phase(1.0 / reflection_coefficient(channel.at(p), m)) for p in pts])
    d = np.diff(np.unwrap(args))
    return int(round(d.sum() / (2.0 * np.pi)))


def _refine(channel: ScatterChannel, m: float, guess: complex, tol: float = 1e-14) -> complex:
    # secant iteration on 1/R, which has a simple zero at the pole
    def g(lam):
        try:
            return 1.0 / reflection_coefficient(channel.at(lam), m)
        except GammaPoleError:
            return 0.0

    x0, x1 = guess + 1e-3, guess - 1e-3j
    g0, g1 = g(x0), g(x1)
    for _ in range(60):
        if g1 == g0:
            break
        x2 = x1 - g1 * (x1 - x0) / (g1 - g0)
        x0, g0 = x1, g1
        x1, g1 = x2, g(x2)
        if abs(x1 - x0) < tol * max(1.0, abs(x1)) or g1 == 0.0:
            break
    return x1


def find_bound_poles(m: float, *, channel: ScatterChannel | None = None, box=(0.0 + 0.0j, 0.0 + 0.0j),
                     energies=None) -> dict:
    """Surviving poles of R_m inside the rectangle ``box = (lower_left, upper_right)``.

    Analytic lattice first, then each survivor is confirmed numerically: winding
    of 1/R on a small circle, a secant refinement of the zero of 1/R, and
    |R| > 1e8 next to the refined point. ``energies`` (E by nu) are matched by
    E = -|lambda|^2 / c1.
    """
    channel = channel or ScatterChannel(lam=0.0)
    lo, hi = complex(box[0]), complex(box[1])
    if hi == lo:
        lo, hi = complex(-1.0, 0.0), complex(1.0, 2.0 * m + 2.0)
    shift = m - channel.m0
    integer_shift = abs(shift - round(shift)) < 1e-12
    n_max = int(max(0.0, (hi.imag - 1.0) / 2.0 - channel.m0)) + 1
    surviving, cancelled = pole_lattice(m, channel.m0, n_max)

    def inside(lam):
        return lo.real <= lam.real <= hi.real and lo.imag <= lam.imag <= hi.imag

    poles = []
    for lam, n in surviving:
        if not inside(lam):
            continue
        wind = _winding(channel, m, lam, 0.25)
        refined = _refine(channel, m, lam + 1e-4 * (1 + 1j))
        try:
            mag = abs(reflection_coefficient(channel.at(refined + 1e-9), m))
        except GammaPoleError:
            mag = float("inf")
        E = -abs(refined) ** 2 / channel.c1
        matched = None
        if energies is not None:
            for nu, e in enumerate(energies):
                if abs(e - E) < 1e-8 * max(1.0, abs(e)):
                    matched = nu
        poles.append(Pole(lam=refined, E=E, n=n, matched_nu=matched, confirmed=(wind == 1 and mag > POLE_CONFIRM),
                          magnitude=mag, winding=wind))
    cancelled_in = []
    for lam, n in cancelled:
        if inside(lam):
            try:
                val = abs(reflection_coefficient(channel.at(lam + 1e-7), m))
            except GammaPoleError:
                val = float("inf")
            cancelled_in.append({"lambda_re": lam.real, "lambda_im": lam.imag, "n": n, "abs_R_nearby": val})
    return {
        "m": m,
        "m0": channel.m0,
        "integer_sector": integer_shift,
        "note": None if integer_shift else "correspondence outside the worked regime (m - m0 not an integer)",
        "poles": poles,
        "cancelled": cancelled_in,
    }


def pole_localization_error(report: dict) -> float:
    """Distance of the refined poles from their exact lattice positions."""
    errs = [abs(p.lam - 1j * (2.0 * (p.n + report["m0"]) + 1.0)) for p in report["poles"]]
    return max(errs) if errs else 0.0


def asymptotic_checks(params: NatanzonParams, cmap: CoordinateMap, r: float = 15.0, p_values=(0.0, 1.5, 3.0),
                      m: float = 1.0) -> dict:
    """Compare the generators, Casimir and potential at large r with their limits.

    Limits: derivative coefficient -/+ sqrt(c1)/2, m coefficient 1, constant
    +/- 1/2 for every p, Casimir G -> c1/4 with U -> -1/4 in the plane-wave
    sector, and V -> (h1 + 1)/c1.
    """
    z, w = cmap.zw(r)
    z = np.array([z])
    w = np.array([w])
    sc1 = math.sqrt(params.c1)
    gen = {}
    worst = 0.0
    for sign, name in ((1, "Jplus"), (-1, "Jminus")):
        rows = []
        for p in p_values:
            d, c_m = generator_coefficients(params, z, w, p, m, sign)
            _, c_0 = generator_coefficients(params, z, w, p, 0.0, sign)
            m_coef = (c_m[0] - c_0[0]) / m
            errs = {
                "d": abs(d[0] - (-sign * sc1 / 2.0)),
                "m_coef": abs(m_coef - 1.0),
                "const": abs(c_0[0] - sign * 0.5),
            }
            worst = max(worst, *errs.values())
            rows.append({"p": p, "d": float(d[0]), "m_coef": float(m_coef), "const": float(c_0[0]), "errors": errs})
        gen[name] = rows
    V = float(potential_in_r(params, cmap, r))
    V_lim = params.threshold
    G = params.R(z[0]) / (4.0 * z[0])
    return {
        "r": r,
        "generators": gen,
        "generator_max_error": worst,
        "casimir_G": float(G),
        "casimir_G_error": abs(G - params.c1 / 4.0),
        "potential": V,
        "potential_limit": V_lim,
        "potential_error": abs(V - V_lim),
        "p_independent": True if worst < 1e-6 else False,
    }


def plane_wave_casimir(c1: float, lam: complex, r=None) -> dict:
    """Apply Q_inf = (c1 d^2/dr^2 - 1)/4 to exp(i k r) with k = lambda/sqrt(c1).

    The second derivative is taken numerically and compared with the closed
    eigenvalue (-lambda^2 - 1)/4.
    """
    k = lam / math.sqrt(c1)
    r = np.linspace(0.0, 10.0, 2001) if r is None else np.asarray(r, dtype=float)
    from . import _fd

    f = np.exp(1j * k * r)
    d2 = _fd.derivative(r, f.real, 2) + 1j * _fd.derivative(r, f.imag, 2)
    Qf = 0.25 * (c1 * d2 - f)
    expected = (-(lam**2) - 1.0) / 4.0
    sl = slice(8, r.size - 8)
    err = float(np.max(np.abs(Qf[sl] - expected * f[sl])))
    return {"eigenvalue": complex(expected), "max_error": err}


def reflection_table(channel: ScatterChannel, m: float, lambdas) -> list[dict]:
    rows = []
    for lam in lambdas:
        R = reflection_coefficient(channel.at(lam), m)
        rows.append({"lambda": float(lam), "re": R.real, "im": R.imag, "abs": abs(R)})
    return rows


def write_reflection_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "Re R", "Im R", "|R|"])
        for row in rows:
            writer.writerow([f"{row[k]:.15g}" for k in ("lambda", "re", "im", "abs")])


def scaled_channel(channel: ScatterChannel, c1: float) -> ScatterChannel:
    """The channel after r -> r / sqrt(c1): lambda is kept, the wavenumber becomes lambda / sqrt(c1)."""
    return ScatterChannel(lam=channel.lam, m0=channel.m0, sigma=channel.sigma, c1=c1, ratio0=channel.ratio0)
