"""Exact lumping analysis of left-invariant random walks on finite groups.

The package decides strong, exact and weak lumping of the walk induced on
left cosets, computes the minimal and maximal stable induced ideals and the
admissible start distributions, characterizes achievable lumped transition
matrices through orbital matrices and bi-invariant weights, and cross-checks
everything against a generic finite-Markov-chain oracle.  All decision paths
use exact rational or cyclotomic arithmetic.
"""

__version__ = "0.1.0"

from .algebra import (
    AlgebraElement,
    abelian_character_idempotent,
    abelian_characters,
    coset_sums,
    eta,
    in_E_bullet,
    inner_product,
    is_idempotent,
    parse_element_file,
    format_element,
)
from .errors import DomainError, InputFormatError, LumpwalkError, ResourceError
from .groups import (
    CosetDecomposition,
    DoubleCosetDecomposition,
    FiniteGroup,
    Permutation,
    Subgroup,
    conjugate_subgroup,
    cosets,
    double_cosets,
    intersect_subgroups,
    parse_cycles,
    parse_group_file,
)
from .hecke import (
    HeckeElement,
    OrbitalMatrix,
    check_Q_characterization,
    hecke_project,
    orbital_matrices,
    verify_hecke_isomorphism,
)
from .linalg import (
    Subspace,
    circ,
    intersect,
    is_induced,
    left_ideal_closure,
    orthogonal_complement,
    project_space,
    right_multiply_space,
    span,
    subspace_sum,
)
from .lumping import (
    GurvitsLedouxIdeal,
    LumpingProblem,
    LumpingReport,
    abelian_weak_test,
    analyze,
    compute_Jw,
    compute_L_alpha_w,
    compute_Lw,
    interpolation_test,
    lumping_function,
    small_H_verdict_consistency,
    stable_ideal_check,
    test_exact,
    test_strong,
    test_weak_distribution,
    test_weak_weight,
    theta_dimension,
    time_reversal_dual_idempotent,
    walk_lumped_matrix,
)
from .markov import (
    Distribution,
    GLSpace,
    LumpingFunction,
    TransitionMatrix,
    compute_Vmax_generic,
    conditional_distribution,
    lumped_transition_matrix,
    minimal_GL_space,
    stationary_distribution,
    test_exact_generic,
    test_strong_generic,
    test_weak_generic,
    time_reversal_matrix,
    transition_from_weight,
)
from .scalars import (
    Cyclo,
    CyclotomicField,
    RationalField,
    RATIONALS,
    cyclotomic_field,
    cyclotomic_polynomial,
    embed_rational,
)
from .shuffles import bottom_card_cycle, random_to_top, top_to_random
from .simulate import (
    Trajectory,
    Xoshiro256StarStar,
    empirical_lumped_matrix,
    markov_diagnostic,
    simulate_ensemble,
    simulate_walk,
)
