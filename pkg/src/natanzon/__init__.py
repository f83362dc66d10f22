"""Natanzon potentials: spectra, su(1,1) generators, scattering poles and satellites."""

from .errors import *  # noqa: F401,F403
from .params import NatanzonParams, PTParams, pt_potential, pt_to_natanzon, validate_params
from .coordmap import CoordinateMap, build_map, potential_in_r, r_of_z, z_of_r
from .spectrum import BoundState, pt_energies, solve_spectrum
from .oracle import GridProblem, UnderResolvedWarning, grid_spectrum, residual
from .wavefun import RadialFunction, eigenfunction, normalize, overlap
from .algebra import MSectorFunction, apply_casimir, apply_generator, commutator_residuals
from .scattering import ScatterChannel, find_bound_poles, jost_recursion, reflection_coefficient
from .satellites import energy_arbitration, reconstruct_potential, shift_exponents

__version__ = "0.1.0"
