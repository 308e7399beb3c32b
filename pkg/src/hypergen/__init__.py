"""Exact tools for hypergenerated stratified Lie algebras."""
from .algebra import (
    AlgebraError,
    GradedLieAlgebra,
    NotAnIdealError,
    NotStratifiedError,
    center,
    derived_subalgebra,
    direct_product,
    ideal_generated,
    invariant_fingerprint,
    is_homogeneous_ideal,
    lie_generated,
    lower_central_series,
    quotient,
    step2_quotient,
    validate,
)
from .catalog import catalog_get, catalog_list, heisenberg, run_golden, run_golden_all
from .constructions import (
    extend_derivation,
    feasible_rank,
    free_metabelian,
    free_nilpotent,
    ideal_growth_bound,
    metabelian_dim,
    metabelian_quotient,
    quaternionic_extension,
    semidirect_sum,
)
from .kaplan import (
    Decision,
    OrderResult,
    SkewPencil,
    Verdict,
    embed_general_matrix_space,
    gs_from_skew,
    is_hypergenerated,
    isotropic_subspace,
    kaplan_pencil,
    metivier_order,
    witness_search,
)
from .linalg import Polynomial, Subspace, pfaffian

__version__ = "0.1.0"
