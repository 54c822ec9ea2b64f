"""Numerical toolkit for asymmetric truncated Toeplitz operators between finite-dimensional model spaces."""
from .atto import (
    AttoMatrix,
    BoundaryCombo,
    Membership,
    SymbolPair,
    adjoint_matrix,
    complete_matrix,
    convert,
    determining_entries,
    dimension_estimate,
    matrix_from_boundary_combo,
    matrix_from_symbol,
    membership_check,
    rank_one_matrix,
    recover_symbol,
    subspace_dims,
)
from .blaschke import BlaschkeProduct, match_zeros, random_blaschke
from .modelspace import BasisSpec, ModelVector, change_basis, clark_system, conjugate_vector, gram
from .numerics import DEFAULT_TOL, ToleranceConfig

__version__ = "0.1.0"
