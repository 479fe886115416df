"""Pseudospectral simulation of the periodic fractional cubic Schrödinger equation,
with numerical audits of the estimates used in its analysis."""

from .errors import ConfigurationError, CostError, FracNLSError, InputError, InstabilityError
from .evolution import EvolutionConfig, TrajectoryRecord, evolve, evolve_to, local_existence_heuristic, step
from .grid import GridSpec, NormSpec, SpectralField, forward_transform, inverse_transform, norm, random_field, sobolev_norm
from .invariants import InvariantSnapshot, energy, gagliardo_nirenberg_ratio, hamiltonian, mass
from .nonlinearity import ResonantParts, cubic, cubic_oracle, resonant_constant, resonant_decompose, resonant_decompose_multilinear, rho_sobolev_norm
from .operators import Projection, apply_frac_derivative, freq_quadruple_gap, project, propagate_linear, symbol_laplacian

__version__ = "0.1.0"
