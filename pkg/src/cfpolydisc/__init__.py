"""Contractive polynomial extension on the polydisc.

The package reformulates a polynomial that vanishes at the origin into its
family of diagonal symbols, screens the family with a triangular-matrix
contraction test, extends it level by level through norm-preserving corner
completions, and cross-checks the results against Hankel distances and a
block-positivity criterion for self-maps of the disc.  `cfpolydisc.cli`
exposes the same entry points as the `cfpd` command.
"""

from .cfsolver import (
    EXTENDED,
    FAILED_DEGREE,
    FAILED_NORM,
    RUNNING,
    CFInstance,
    ExtensionRun,
    HypothesisError,
    NecessaryReport,
    SpecialCaseResult,
    StepRecord,
    cf_extend,
    cf_one_var,
    necessary_condition,
    special_case_extend,
)
from .completion import (
    CompletionError,
    ParrottProblem,
    ParrottSolution,
    central_solution,
    parrott_complete,
)
from .koranyi import (
    CayleyPair,
    KPVerdict,
    cayley_forward,
    cayley_inverse,
    cayley_pair,
    kp_equivalence_check,
    kp_positive,
    kp_test_map,
    schur_identity_check,
)
from .nehari import hankel_norm, natural_depth, nehari_distance
from .opnorm import (
    full_function_norm,
    laurent_section_norm,
    op_norm,
    symbol_matrix_min_eig,
    symbol_matrix_norm,
    toeplitz_norm,
)
from .polyalg import (
    GridValue,
    NPoly,
    TorusGrid,
    TrigPoly,
    evaluate,
    sup_norm,
)
from .slicing import (
    MembershipError,
    SymbolFamily,
    inverse_reformulate,
    membership_report,
    reformulate,
    slice_decompose,
    slice_support,
)

__version__ = "0.1.0"

__all__ = [
    "CFInstance",
    "CayleyPair",
    "CompletionError",
    "EXTENDED",
    "ExtensionRun",
    "FAILED_DEGREE",
    "FAILED_NORM",
    "GridValue",
    "HypothesisError",
    "KPVerdict",
    "MembershipError",
    "NPoly",
    "NecessaryReport",
    "ParrottProblem",
    "ParrottSolution",
    "RUNNING",
    "SpecialCaseResult",
    "StepRecord",
    "SymbolFamily",
    "TorusGrid",
    "TrigPoly",
    "cayley_forward",
    "cayley_inverse",
    "cayley_pair",
    "central_solution",
    "cf_extend",
    "cf_one_var",
    "evaluate",
    "full_function_norm",
    "hankel_norm",
    "inverse_reformulate",
    "kp_equivalence_check",
    "kp_positive",
    "kp_test_map",
    "laurent_section_norm",
    "membership_report",
    "natural_depth",
    "necessary_condition",
    "nehari_distance",
    "op_norm",
    "parrott_complete",
    "reformulate",
    "schur_identity_check",
    "slice_decompose",
    "slice_support",
    "special_case_extend",
    "sup_norm",
    "symbol_matrix_min_eig",
    "symbol_matrix_norm",
    "toeplitz_norm",
    "__version__",
]
