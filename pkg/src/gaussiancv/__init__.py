"""Gaussian continuous-variable states: moments, symplectic maps and Renyi-2 measures.

Conventions throughout: interleaved quadratures (q1, p1, ..., qN, pN),
hbar = 1, and the doubled covariance matrix with vacuum sigma = I.  Mode
indices are 0-based.
"""

from .errors import InvalidArgument, InvalidState, NumericError
from .measures import (
    MeasureResult,
    check_monogamy,
    check_strong_subadditivity,
    classical_correlations_J2,
    discord_D2,
    entanglement_E2_pure,
    entanglement_E2_two_mode,
    epr_parameter,
    mutual_information_renyi2,
    renyi2_entropy,
    renyi_entropy,
    residual_tripartite_E2,
    squeezing_db,
    squeezing_from_db,
    von_neumann_entropy,
)
from .ops import apply, apply_gate, condition, displace, embed, gate_from_hamiltonian, gate_matrix, seed
from .phasespace import Grid2D, characteristic, marginal, quadrature_checks, wigner, wigner_grid
from .states import (
    GaussianState,
    TwoModeStandardForm,
    coherent,
    direct_sum,
    is_physical,
    partial_trace,
    purity,
    random_state,
    squeezed,
    symplectic_invariants,
    thermal,
    three_mode_pure,
    two_mode_squeezed,
    two_mode_standard_form,
    vacuum,
)
from .symplectic import (
    QuadraticHamiltonian,
    euler_decompose,
    is_symplectic,
    symplectic_form,
    symplectic_from_hamiltonian,
    symplectic_spectrum,
    williamson,
)

__version__ = "0.1.0"

