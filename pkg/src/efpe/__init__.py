"""Exact perfect-equilibrium computation for two-player extensive-form games.

The package computes extensive-form perfect equilibria by solving the game
under vanishing probability floors with exact rational arithmetic: floors
enter the sequence-form complementarity system symbolically, a provably
negligible floor size eps* is derived from coefficient bounds, the system is
solved at eps* by complementary pivoting (or an LP for zero-sum games), and
the limit of the solution as the floors vanish is extracted symbolically.
"""

from .errors import (
    EfpeError,
    EpsilonBitsCapError,
    EpsilonRangeError,
    GameFormatError,
    PivotBudgetError,
    RayTerminationError,
    SingularMatrixError,
    SolverError,
    UnboundedLimitError,
    VerificationError,
)
from .games import (
    Decision,
    Game,
    Terminal,
    load_game,
    parse_game,
    serialize_game,
    uniform_profile,
    validate_behavioral_profile,
    validate_perfect_recall,
)
from .lcp import (
    LcpInstance,
    NppCertificate,
    apply_negative_offset,
    build_lcp,
    compute_npp,
    optimality_certificate,
)
from .lemke import LemkeResult, check_lemke_preconditions, lemke_solve
from .limits import (
    EquilibriumResult,
    decode_at,
    extract_limit,
    prepare,
    result_from_json,
    result_to_json,
    solve_efpe,
    solve_nash,
    solve_perturbed,
)
from .lp import is_zero_sum, simplex_min
from .perturbation import build_R, invert_R, max_branching
from .poly import (
    Poly,
    format_poly,
    integer_rational_sign,
    limit_at_zero,
    poly_sign_threshold,
    rational_sign_threshold,
)
from .polymatrix import PolyMatrix, polymatrix_det, polymatrix_solve
from .seqform import (
    SequenceForm,
    behavioral_to_realization,
    build_sequence_form,
    expected_utilities,
    plans_from_profile,
    profile_from_plans,
    realization_to_behavioral,
    validate_realization_plan,
)
from .verify import (
    agent_form_utilities,
    brute_force_perturbed_ne,
    check_affine_relation,
    check_nash,
    check_perturbed_equilibrium,
    verify_result,
)

__version__ = "0.1.0"

__all__ = [
    "EfpeError",
    "GameFormatError",
    "SolverError",
    "SingularMatrixError",
    "RayTerminationError",
    "PivotBudgetError",
    "EpsilonRangeError",
    "EpsilonBitsCapError",
    "UnboundedLimitError",
    "VerificationError",
    "Game",
    "Terminal",
    "Decision",
    "parse_game",
    "serialize_game",
    "load_game",
    "uniform_profile",
    "validate_behavioral_profile",
    "validate_perfect_recall",
    "SequenceForm",
    "build_sequence_form",
    "behavioral_to_realization",
    "plans_from_profile",
    "profile_from_plans",
    "realization_to_behavioral",
    "validate_realization_plan",
    "expected_utilities",
    "build_R",
    "invert_R",
    "max_branching",
    "Poly",
    "format_poly",
    "poly_sign_threshold",
    "rational_sign_threshold",
    "integer_rational_sign",
    "limit_at_zero",
    "PolyMatrix",
    "polymatrix_det",
    "polymatrix_solve",
    "LcpInstance",
    "NppCertificate",
    "apply_negative_offset",
    "build_lcp",
    "compute_npp",
    "optimality_certificate",
    "LemkeResult",
    "lemke_solve",
    "check_lemke_preconditions",
    "is_zero_sum",
    "simplex_min",
    "EquilibriumResult",
    "prepare",
    "solve_efpe",
    "solve_perturbed",
    "solve_nash",
    "extract_limit",
    "decode_at",
    "result_to_json",
    "result_from_json",
    "agent_form_utilities",
    "check_perturbed_equilibrium",
    "check_nash",
    "check_affine_relation",
    "brute_force_perturbed_ne",
    "verify_result",
]
