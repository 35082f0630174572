"""dgalift: exact calculus in graded-commutative DG algebra extensions.

The package decides and constructs liftings of finite-rank free DG modules
along a one-variable extension of a DG algebra, by way of a derivation
calculus on the endomorphism ring of the module.
"""

from .algebra import (
    AlgElem,
    Signature,
    Variable,
    component_monomials,
    derivative,
    diff,
    format_expr,
    is_boundary_up_to,
    is_cycle,
    tate_adjoin,
)
from .errors import (
    DgaliftError,
    ExprSyntaxError,
    NotInvertibleError,
    SchemaError,
    VerificationError,
)
from .field import QQ, Field, PrimeField, RationalField, field_from_spec
from .jop import JOperator, WeakJOp, base_change_defect, characterization_check
from .lift import (
    HomotopyCertificate,
    LiftDecision,
    LiftResult,
    Obstruction,
    construct_lift_even,
    construct_lift_odd,
    decide_naive_lift,
    obstruction,
    solve_homotopy,
    verify_lift,
)
from .module import (
    Differential,
    DOpPair,
    FreeModule,
    GradedMap,
    ModuleElement,
    ad_of,
    apply_diff,
    apply_map,
    bracket,
    bracket_diff,
    bracket_diff2,
    compose,
    direct_sum,
    dop_normalize,
    idempotent,
    invert_unit,
    is_scalar_cycle,
    left_mult,
    sharp_map,
    shift,
    square_of,
    twofold_extension,
    unit_elementary,
)
from .parser import parse_expr
from .tensor import NaiveTensor, odd_ses, rho_from_lift, split_by_powers, verify_splitting

__all__ = [
    "AlgElem",
    "Signature",
    "Variable",
    "component_monomials",
    "derivative",
    "diff",
    "format_expr",
    "is_boundary_up_to",
    "is_cycle",
    "tate_adjoin",
    "parse_expr",
    "QQ",
    "Field",
    "PrimeField",
    "RationalField",
    "field_from_spec",
    "DgaliftError",
    "ExprSyntaxError",
    "NotInvertibleError",
    "SchemaError",
    "VerificationError",
    "FreeModule",
    "ModuleElement",
    "GradedMap",
    "Differential",
    "DOpPair",
    "apply_map",
    "apply_diff",
    "compose",
    "bracket",
    "bracket_diff",
    "bracket_diff2",
    "square_of",
    "left_mult",
    "idempotent",
    "unit_elementary",
    "invert_unit",
    "is_scalar_cycle",
    "ad_of",
    "dop_normalize",
    "shift",
    "direct_sum",
    "twofold_extension",
    "sharp_map",
    "JOperator",
    "WeakJOp",
    "base_change_defect",
    "characterization_check",
    "Obstruction",
    "HomotopyCertificate",
    "LiftDecision",
    "LiftResult",
    "obstruction",
    "solve_homotopy",
    "decide_naive_lift",
    "construct_lift_even",
    "construct_lift_odd",
    "verify_lift",
    "NaiveTensor",
    "odd_ses",
    "rho_from_lift",
    "split_by_powers",
    "verify_splitting",
]
