"""Exact symbolic computation with linear ordinary boundary problems.

Integro-differential operators over exponential-polynomial coefficients,
generalized Green's operators, compatibility conditions, composition with
the reverse order law test, and factorization of boundary problems.
"""

from .algorithms import (
    check_reverse_order_law,
    compose,
    factor_chain,
    factor_left_regular,
    factor_right_regular,
    first_order_factors,
    inverse_image,
    is_outer_inverse,
    left_regular_split,
    split_conditions,
)
from .constants import ExpConstant
from .errors import *  # noqa: F401,F403
from .evaluate import eval_ast, evaluate
from .funcalg import ExpPoly, Func, X, fn_add, fn_differentiate, fn_evaluate, fn_integrate, fn_mul
from .idop import (
    A,
    D,
    IDENTITY,
    E,
    IdOperator,
    fundamental_right_inverse,
    op_apply,
    op_is_zero,
    op_multiply,
    wronskian_matrix,
)
from .linalg import KMatrix, kernel_basis, left_inverse, rank, rref_with_transform, solve
from .parser import parse, unparse
from .problems import (
    BP,
    GBP,
    BoundaryProblem,
    CondSpace,
    FuncSpace,
    compatibility_conditions,
    evaluation_matrix,
    funcspace_intersect,
    greens_operator,
    greens_operator_regular,
    intersect_dual,
    intersect_primal,
    is_regular,
    is_semi_regular,
    space_leq,
    space_sum,
)

__version__ = "0.1.0"
