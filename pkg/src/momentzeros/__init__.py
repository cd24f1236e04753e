"""Exact truncated moment matrices, their orthogonal polynomials and inverse zero patterns."""

from .measures import (
    AtomicMeasure,
    Grouping,
    MomentSequence,
    atomic_moments,
    disk_moments,
    grouped_product_moments,
    is_product_rank_test,
    laguerre_product_moments,
    perturb_first_coordinate,
    product_moments,
)
from .momentmatrix import (
    MomentMatrix,
    Polynomial,
    apply_functional,
    build_moment_matrix,
    inner_product_y,
    is_positive_definite,
)
from .multiindex import GLexBasis, MultiIndex, enumerate_glex, fg_leq, glex_compare, lcm_max
from .orthopoly import (
    NotPositiveDefiniteError,
    OrthoBasis,
    determinantal_polynomial,
    gram_schmidt,
    is_conditionally_triangular,
    is_fully_triangular,
)
from .inversepattern import (
    InverseMatrix,
    ZeroPattern,
    check_zero_in_inverse,
    congenital_zero_predicate,
    grouped_congenital_predicate,
    inverse_via_factorization,
    zero_pattern,
)

__version__ = "0.1.0"

__all__ = [
    "AtomicMeasure",
    "GLexBasis",
    "Grouping",
    "InverseMatrix",
    "MomentMatrix",
    "MomentSequence",
    "MultiIndex",
    "NotPositiveDefiniteError",
    "OrthoBasis",
    "Polynomial",
    "ZeroPattern",
    "apply_functional",
    "atomic_moments",
    "build_moment_matrix",
    "check_zero_in_inverse",
    "congenital_zero_predicate",
    "determinantal_polynomial",
    "disk_moments",
    "enumerate_glex",
    "fg_leq",
    "glex_compare",
    "gram_schmidt",
    "grouped_congenital_predicate",
    "grouped_product_moments",
    "inner_product_y",
    "inverse_via_factorization",
    "is_conditionally_triangular",
    "is_fully_triangular",
    "is_positive_definite",
    "is_product_rank_test",
    "laguerre_product_moments",
    "lcm_max",
    "perturb_first_coordinate",
    "product_moments",
    "zero_pattern",
]
