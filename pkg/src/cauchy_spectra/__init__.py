"""Spectral solver for the 1D Cauchy operator (-Laplacian)^(1/2) + V(x).

Low-lying eigenvalues and eigenfunctions are obtained by imaginary-time
propagation of a trial set with second-order operator splitting, ordered
Gram-Schmidt filtering, and explicit control of the spatial and
jump-integral cutoffs. All kinetic-operator work happens in configuration
space as a principal-value summation; an FFT realization of the identical
discrete convolution keeps large grids fast.
"""

from .grid import (Grid, GridFunction, inner_product, norm, normalize,
                   read_csv, restrict_or_embed, write_csv)
from .operators import (CauchyKernel, PotentialSpec, apply_cauchy,
                        apply_potential, expectation_energy, write_weights_csv)
from .propagator import StrangStep, evolve, step
from .reference import (AIRY_GROUND_ENERGY, AiryGroundState, airy_ai,
                        airy_psi1, detuning, g_transform, gamma_density,
                        infwell_energy, infwell_psi, q_function,
                        tail_exponent_fit)
from .spectral import (SolverConfig, SpectralResult, TrialBasis, count_nodes,
                       energy_estimate, gram_schmidt_ordered, hermite_function,
                       make_trial, solve, solve_with_trials)

__version__ = "0.1.0"

__all__ = [
    "Grid", "GridFunction", "inner_product", "norm", "normalize",
    "restrict_or_embed", "write_csv", "read_csv",
    "CauchyKernel", "PotentialSpec", "apply_cauchy", "apply_potential",
    "expectation_energy", "write_weights_csv",
    "StrangStep", "step", "evolve",
    "TrialBasis", "SolverConfig", "SpectralResult", "hermite_function",
    "make_trial", "gram_schmidt_ordered", "energy_estimate", "solve",
    "solve_with_trials", "count_nodes",
    "AIRY_GROUND_ENERGY", "airy_ai", "AiryGroundState", "airy_psi1",
    "infwell_energy", "infwell_psi", "q_function", "gamma_density",
    "g_transform", "detuning", "tail_exponent_fit",
    "__version__",
]
