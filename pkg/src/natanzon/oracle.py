"""Independent grid solver for -psi'' + V psi = E psi on [0, r_max] (Dirichlet or even wall at 0).

Eigenvalues come from Sturm-sequence multisection on the symmetric tridiagonal
second-difference matrix, all requested levels refined together.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _fd
from .errors import DomainError


class UnderResolvedWarning(UserWarning):
    """Two grid resolutions disagree by more than the tolerance."""


@dataclass(frozen=True, eq=False)
class GridProblem:
    """Uniform interior nodes with a Dirichlet wall at r_max.

    ``boundary="dirichlet"``: nodes r_i = i h, i = 1 .. n-1, h = r_max / n, psi(0) = 0.
    ``boundary="neumann"``: cell-centred nodes r_i = (i - 1/2) h, i = 1 .. n, h = r_max / n,
    psi'(0) = 0 by an even mirror node and psi(r_max) = 0 by an odd one; for
    potentials regular at the origin whose states are even.
    """

    r_grid: np.ndarray
    V_values: np.ndarray
    r_max: float
    potential: Callable | None = None
    boundary: str = "dirichlet"

    def __post_init__(self):
        h = np.diff(self.r_grid)
        if self.r_grid.size < 3 or not np.allclose(h, h[0], rtol=1e-9, atol=0.0):
            raise DomainError("GridProblem needs a uniform grid of at least 3 nodes")
        if not np.all(np.isfinite(self.V_values)):
            raise DomainError("potential is not finite at every grid node")
        if self.boundary not in ("dirichlet", "neumann"):
            raise DomainError(f"unknown boundary {self.boundary!r}")

    @property
    def h(self) -> float:
        return float(self.r_grid[1] - self.r_grid[0])

    @property
    def n(self) -> int:
        return self.r_grid.size + (1 if self.boundary == "dirichlet" else 0)

    @classmethod
    def from_potential(cls, potential: Callable, r_max: float = 20.0, n: int = 4000,
                       boundary: str = "dirichlet") -> "GridProblem":
        if boundary == "neumann":
            r = (np.arange(1, n + 1) - 0.5) * (r_max / n)
        else:
            r = np.arange(1, n) * (r_max / n)
        return cls(r_grid=r, V_values=np.asarray(potential(r), dtype=float), r_max=float(r_max),
                   potential=potential, boundary=boundary)

    def refined(self) -> "GridProblem":
        if self.potential is None:
            raise DomainError("refinement needs the potential callable")
        return GridProblem.from_potential(self.potential, self.r_max, 2 * self.n, self.boundary)

    def check_resolution(self) -> bool:
        """True if h <= 1 / (10 sqrt|V_min|)."""
        vmin = float(np.min(self.V_values))
        return vmin >= 0.0 or self.h <= 1.0 / (10.0 * np.sqrt(-vmin))


def sturm_count(diag: np.ndarray, off2: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Number of eigenvalues below each entry of ``lam`` (``off2`` = squared off-diagonal)."""
    lam = np.asarray(lam, dtype=float)
    count = np.zeros(lam.shape, dtype=np.int64)
    tiny = np.finfo(float).tiny ** 0.5
    d = diag[0] - lam
    for i in range(diag.size):
        if i:
            d = (diag[i] - lam) - off2[i - 1] / d
        d = np.where(d == 0.0, -tiny, d)
        count += d < 0.0
    return count


def tridiagonal_eigenvalues(diag, off, k: int, tol: float = 1e-13, probes: int = 31) -> np.ndarray:
    """The k lowest eigenvalues of a symmetric tridiagonal matrix by multisection.

    Every sweep places ``probes`` equispaced points inside each bracket, so one
    pass over the matrix shrinks all brackets by a factor ``probes + 1``.
    """
    diag = np.asarray(diag, dtype=float)
    off = np.asarray(off, dtype=float)
    if k < 1 or k > diag.size:
        raise DomainError(f"k must lie in [1, {diag.size}]")
    # Gershgorin bounds
    rad = np.zeros_like(diag)
    rad[:-1] += np.abs(off)
    rad[1:] += np.abs(off)
    lo0, hi0 = float(np.min(diag - rad)), float(np.max(diag + rad))
    off2 = off * off
    lo = np.full(k, lo0)
    hi = np.full(k, hi0)
    target = np.arange(1, k + 1)[:, None]
    frac = np.arange(1, probes + 1) / (probes + 1.0)
    while np.any(hi - lo > tol * np.maximum(1.0, np.abs(lo) + np.abs(hi))):
        pts = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
        counts = sturm_count(diag, off2, pts)
        above = counts >= target  # eigenvalue number j lies below this probe
        first = np.where(above.any(axis=1), above.argmax(axis=1), probes)
        new_lo = np.where(first > 0, pts[np.arange(k), np.maximum(first - 1, 0)], lo)
        new_hi = np.where(first < probes, pts[np.arange(k), np.minimum(first, probes - 1)], hi)
        lo, hi = new_lo, new_hi
    return 0.5 * (lo + hi)


def raw_spectrum(problem: GridProblem, k: int) -> np.ndarray:
    inv_h2 = 1.0 / problem.h**2
    diag = 2.0 * inv_h2 + problem.V_values
    if problem.boundary == "neumann":
        diag[0] -= inv_h2  # even mirror at r = 0
        diag[-1] += inv_h2  # odd mirror at r = r_max
    off = np.full(problem.r_grid.size - 1, -inv_h2)
    return tridiagonal_eigenvalues(diag, off, k)


def grid_spectrum(problem: GridProblem, k: int, *, richardson: bool = True, warn_tol: float = 1e-3) -> np.ndarray:
    """The k lowest eigenvalues, extrapolated as (4 E_{h/2} - E_h) / 3 when a refinement is possible.

    Emits ``UnderResolvedWarning`` when the two resolutions differ by more than
    ``warn_tol`` relative, or when the grid is too coarse for the deepest part of the well.
    """
    if not problem.check_resolution():
        warnings.warn("grid spacing exceeds 1/(10 sqrt|V_min|)", UnderResolvedWarning, stacklevel=2)
    coarse = raw_spectrum(problem, k)
    if not richardson or problem.potential is None:
        return coarse
    fine = raw_spectrum(problem.refined(), k)
    scale = np.maximum(np.abs(fine), 1.0)
    if np.any(np.abs(fine - coarse) > warn_tol * scale):
        warnings.warn("grid spectrum under-resolved: two resolutions disagree", UnderResolvedWarning, stacklevel=2)
    return (4.0 * fine - coarse) / 3.0


def residual(V_values, psi, E: float, *, r_grid=None, edge: int = 8) -> float:
    """max |-psi'' + V psi - E psi| / (max(|E|, 1) max|psi|) over interior nodes.

    ``psi`` is either a RadialFunction or an array (then ``r_grid`` is required).
    ``edge`` nodes at each end are excluded, since the differences are one-sided there.
    The floor of 1 on |E| keeps the measure defined for zero-energy states.
    """
    if r_grid is None:
        r_grid = psi.r_grid
        values = psi.values
    else:
        values = psi
    values = np.asarray(values, dtype=float)
    V = np.asarray(V_values, dtype=float)
    d2 = _fd.derivative(r_grid, values, 2)
    res = -d2 + (V - E) * values
    sl = slice(edge, values.size - edge)
    scale = max(abs(E), 1.0) * float(np.max(np.abs(values)))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(res[sl])) / scale)


def problem_from_params(params, r_max: float = 20.0, n: int = 4000, cmap=None) -> GridProblem:
    """Grid problem for a Natanzon potential, evaluated through the coordinate map."""
    from .coordmap import build_map, potential_in_r

    if cmap is None:
        cmap = build_map(params, r_max=r_max, n_points=max(n, 100))
    return GridProblem.from_potential(lambda r: potential_in_r(params, cmap, r), r_max, n)
