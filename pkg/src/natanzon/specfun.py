"""Complex log-Gamma and terminating Gauss hypergeometric series.

Both kernels are pure functions of their arguments. Complex values are plain
Python ``complex`` numbers.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import DenominatorError, GammaPoleError

# Lanczos approximation, g = 7, nine coefficients (relative error ~1e-15 on Re z > 1/2).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
POLE_TOL = 1e-12


def _check_pole(z: complex) -> None:
    n = round(z.real)
    if n <= 0 and abs(z.real - n) < POLE_TOL and abs(z.imag) < POLE_TOL:
        raise GammaPoleError(f"Gamma has a pole at z = {n}", argument=z)


def _ln_gamma_right(z: complex) -> complex:
    # valid for Re z >= 1/2
    zm = z - 1.0
    x = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        x += _LANCZOS_COEF[i] / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * cmath.log(t) - t + cmath.log(x)


def ln_gamma(z) -> complex:
    """Principal branch of log Gamma(z).

    Uses the Lanczos sum for ``Re z >= 1/2``. Left of that line the argument
    is shifted up with ``log Gamma(z) = log Gamma(z + n) - sum log(z + k)``,
    which keeps the principal branch without any 2*pi*i bookkeeping.

    Raises:
        GammaPoleError: if ``z`` is within ``1e-12`` of a non-positive integer.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite argument {z!r}")
    _check_pole(z)
    if z.real >= 0.5:
        return _ln_gamma_right(z)
    n = int(math.ceil(0.5 - z.real))
    acc = 0j
    for k in range(n):
        acc += cmath.log(z + k)
    return _ln_gamma_right(z + n) - acc


def gamma(z) -> complex:
    """Gamma(z) as ``exp(ln_gamma(z))``."""
    return cmath.exp(ln_gamma(z))


def pochhammer(x, k: int):
    """Rising factorial (x)_k for integer ``k >= 0``; works for any numeric type."""
    out = 1
    for i in range(k):
        out = out * (x + i)
    return out


def gauss_2f1_terminating(n: int, b, c, z):
    """Evaluate 2F1(-n, b; c; z) as the exact (n+1)-term polynomial.

    The series is built by forward recurrence on the term ratio

        t_{k+1} / t_k = (k - n)(b + k) / ((c + k)(k + 1)) * z

    so it works unchanged for floats, numpy arrays (vectorized over ``z``)
    and ``fractions.Fraction`` inputs (exact arithmetic).

    Raises:
        DenominatorError: if some (c)_k with k <= n - 1 vanishes.
    """
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    n = int(n)
    for k in range(n):
        if c + k == 0:
            raise DenominatorError(f"(c)_{k + 1} vanishes for c = {c!r}")
    if isinstance(z, np.ndarray):
        term = np.ones_like(z, dtype=float)
        total = np.ones_like(z, dtype=float)
    else:
        term = 1
        total = 1
    for k in range(n):
        term = term * ((k - n) * (b + k)) / ((c + k) * (k + 1)) * z
        total = total + term
    return total
