"""Composition, reverse order law and factorization of generalized boundary problems."""

from dataclasses import dataclass
from itertools import combinations

from . import linalg
from .errors import (
    BadFactorization,
    InvalidBasis,
    MissingFundamentalSystem,
    NoClosedForm,
    NotRegular,
    NotSemiRegular,
    OrderMismatch,
    SearchExhausted,
)
from .funcalg import Func
from .idop import IdOperator, fundamental_right_inverse
from .problems import (
    BoundaryProblem,
    CondSpace,
    FuncSpace,
    _combine_ops,
    characteristic_roots,
    compatibility_conditions,
    constant_coefficient_fundsys,
    evaluation_matrix,
    funcspace_intersect,
    intersect_dual,
    intersect_primal,
    is_regular,
    is_semi_regular,
    kernel_functions,
)


def _product_kernel(T1, T2, fs1, fs2):
    """Basis of ``Ker(T1 T2)`` from kernels of the factors, or None if unavailable."""
    try:
        ks2 = kernel_functions(T2, fs2)
        ks1 = kernel_functions(T1, fs1)
        H2 = fundamental_right_inverse(T2, ks2)
        return tuple(ks2) + tuple(H2.apply(u) for u in ks1)
    except (MissingFundamentalSystem, NoClosedForm):
        return None


def compose(p1, p2):
    """Composite ``(T1 T2, B2 + T2*(B1 ∩ E2^⊥), E1 + T1(B1^⊥ ∩ E2))``."""
    T = p1.T * p2.T
    gamma = intersect_dual(p1.B, p2.E)
    v = intersect_primal(p2.E, p1.B)
    delta = [g * p2.T for g in gamma]
    t = [p1.T.apply(u) for u in v]
    B = CondSpace.spanned_by(p2.B.basis + tuple(delta)).reduced()
    E = FuncSpace.spanned_by(p1.E.basis + tuple(t))
    fundsys = None
    if p1.fundsys is not None or p2.fundsys is not None:
        fundsys = _product_kernel(p1.T, p2.T, p1.fundsys, p2.fundsys)
    return BoundaryProblem(T, B, E, fundsys)


def inverse_image(T, E, fundsys=None):
    """Basis of ``T^{-1}(E) = Ker T ∔ T◆(E)``."""
    ks = kernel_functions(T, fundsys)
    H = fundamental_right_inverse(T, ks)
    return FuncSpace.spanned_by(tuple(ks) + tuple(H.apply(e) for e in FuncSpace.spanned_by(E)))


def check_reverse_order_law(p1, p2):
    """Decide whether ``G2 G1`` is the Green's operator of ``p1 ∘ p2``.

    Tests ``C2 + (B1 ∩ E2^⊥) >= B1 ∩ (E2 ∩ K1)^⊥`` with ``K1 = T1^{-1}(E1)``
    and ``C2`` the compatibility conditions of ``p2``.
    """
    for p in (p1, p2):
        if not is_regular(p):
            raise NotRegular(f"{p} is not regular")
    K1 = inverse_image(p1.T, p1.E, p1.fundsys)
    J = funcspace_intersect(p2.E, K1)
    B = intersect_dual(p1.B, J)
    K = intersect_dual(p1.B, p2.E)
    C = compatibility_conditions(p2) + K
    return B <= C


def is_outer_inverse(G, T):
    """True iff ``G T G = G``."""
    return (G * T * G - G).is_zero()


def split_conditions(B, T2, fundsys2=None):
    """Row-reduce the conditions of ``B`` against a fundamental system of ``T2``.

    Returns ``(beta_tilde, M, S)`` where ``M`` is the evaluation matrix, ``S``
    the rref transform and ``beta_tilde[i] = sum_k S[i,k] B[k]``.  The first
    ``ord T2`` of them make ``T2`` regular; the rest span ``B ∩ (Ker T2)^⊥``.
    """
    B = B if isinstance(B, CondSpace) else CondSpace(B)
    ks2 = kernel_functions(T2, fundsys2)
    M = evaluation_matrix(B, ks2)
    if linalg.rank(M) != len(ks2):
        raise NotSemiRegular(f"({T2}, {B}) is not semi-regular")
    _, S = linalg.rref_with_transform(M)
    beta = [_combine_ops(S.row(i), B.basis) for i in range(S.nrows)]
    return beta, M, S


def _check_factors(T, T1, T2):
    if T1.order() + T2.order() != T.order():
        raise OrderMismatch(f"orders {T1.order()} + {T2.order()} do not add up to {T.order()}")
    if T1 * T2 != T:
        raise BadFactorization(f"({T1}).({T2}) is not {T}")


def factor_right_regular(p, T1, T2, fundsys2=None):
    """Split ``p = (T1, B1, E) ∘ (T2, B2)`` with a regular right factor.

    Regularity of ``p`` is verified when a fundamental system of ``T`` is
    available; otherwise it is assumed.
    """
    _check_factors(p.T, T1, T2)
    if p.has_kernel() and not is_regular(p):
        raise NotRegular(f"{p} is not regular")
    mu = T2.order()
    beta, _, _ = split_conditions(p.B, T2, fundsys2)
    H2 = fundamental_right_inverse(T2, kernel_functions(T2, fundsys2))
    alpha = [b * H2 for b in beta[mu:]]
    fundsys1 = None
    if p.fundsys is not None:
        fundsys1 = FuncSpace.spanned_by(T2.apply(u) for u in p.fundsys).basis
    left = BoundaryProblem(T1, CondSpace(alpha).reduced(), p.E, fundsys1)
    right = BoundaryProblem(T2, CondSpace(beta[:mu]).reduced(), (), fundsys2)
    return left, right


def first_order_factors(T):
    """``[D - l_1, ..., D - l_n]`` for a constant-coefficient ``T`` with rational roots."""
    D = IdOperator.D()
    return [D - Func.const(lam) for lam in sorted(characteristic_roots(T))]


def factor_chain(p, factors):
    """Factor ``p`` along ``T = factors[0] ... factors[-1]`` by peeling regular right factors.

    Returns problems in the same left-to-right order as ``factors``.
    """
    factors = list(factors)
    if not factors:
        raise BadFactorization("empty factorization")
    out = []
    current = p
    while len(factors) > 1:
        T1 = factors[0]
        for f in factors[1:-1]:
            T1 = T1 * f
        current, right = factor_right_regular(current, T1, factors[-1])
        out.append(right)
        factors.pop()
    if current.T != factors[0]:
        raise BadFactorization("product of the factors does not match the operator")
    out.append(current)
    return out[::-1]


@dataclass(frozen=True)
class LeftRegularSplit:
    """Intermediate data of the left-regular factorization strategy."""

    left: BoundaryProblem
    right_conditions: CondSpace
    pushed: tuple
    compat: CondSpace


def left_regular_split(p, T1, T2, fundsys1=None, fundsys2=None):
    """Steps 1-3: regular left factor, and the right conditions with pushed-down extras."""
    _check_factors(p.T, T1, T2)
    fs = p.fundsys
    if fs is None and (fundsys1 is not None or fundsys2 is not None):
        fs = _product_kernel(T1, T2, fundsys1, fundsys2)
    q = BoundaryProblem(p.T, p.B, (), fs)
    if not is_semi_regular(q):
        raise NotSemiRegular(f"({p.T}, {p.B}) is not semi-regular")
    mu = T2.order()
    beta, _, _ = split_conditions(p.B, T2, fundsys2)
    H2 = fundamental_right_inverse(T2, kernel_functions(T2, fundsys2))
    alpha = CondSpace([b * H2 for b in beta[mu:]]).reduced().basis
    ks1 = kernel_functions(T1, fundsys1)
    N = evaluation_matrix(alpha, ks1)
    m = T1.order()
    chosen = next(
        (
            idx
            for idx in combinations(range(len(alpha)), m)
            if linalg.is_invertible(linalg.KMatrix([N.row(i) for i in idx], N.ncols))
        ),
        None,
    )
    if chosen is None:
        raise NotSemiRegular(f"({T1}, {CondSpace(alpha)}) is not semi-regular")
    left = BoundaryProblem(T1, CondSpace([alpha[i] for i in chosen]), (), fundsys1)
    pushed = tuple(alpha[i] * T2 for i in range(len(alpha)) if i not in chosen)
    B2 = CondSpace.spanned_by(tuple(beta[:mu]) + pushed).reduced()
    compat = compatibility_conditions(T2, B2, fundsys2)
    return LeftRegularSplit(left, B2, pushed, compat)


def _pool_order(lam):
    return (abs(lam), -lam)


def default_pool(p, fundsys1=None, fundsys2=None):
    """Monomials ``x^k exp(lam*x)`` ordered by degree, then by ``|lam|`` (positive first)."""
    freqs = {0} | p.T.frequencies()
    for b in p.B:
        freqs |= b.frequencies()
    for fs in (p.fundsys, fundsys1, fundsys2):
        for u in fs or ():
            freqs |= u.frequencies()
    if p.fundsys is None:
        try:
            for u in constant_coefficient_fundsys(p.T):
                freqs |= u.frequencies()
        except MissingFundamentalSystem:
            pass
    kmax = p.order + p.B.dim
    return [Func.monomial(lam, k) for k in range(kmax + 1) for lam in sorted(freqs, key=_pool_order)]


def factor_left_regular(p, T1, T2, fundsys1=None, fundsys2=None, candidate_pool=None):
    """Factor a semi-regular ``(T, B)`` into a regular left problem and a generalized right one.

    The exceptional space of the right factor is searched among subsets of
    ``candidate_pool``, in order; the first subset giving a regular right
    problem for which the reverse order law holds is taken.
    """
    split = left_regular_split(p, T1, T2, fundsys1, fundsys2)
    r = split.compat.dim
    if r == 0:
        return split.left, BoundaryProblem(T2, split.right_conditions, (), fundsys2)
    pool = list(candidate_pool) if candidate_pool is not None else default_pool(p, fundsys1, fundsys2)
    pool = [Func.const(f) if not isinstance(f, Func) else f for f in pool]
    for cand in combinations(pool, r):
        try:
            E2 = FuncSpace(cand)
        except (InvalidBasis, NoClosedForm):
            continue
        if not linalg.is_invertible(evaluation_matrix(split.compat, E2)):
            continue
        right = BoundaryProblem(T2, split.right_conditions, E2, fundsys2)
        if check_reverse_order_law(split.left, right):
            return split.left, right
    raise SearchExhausted(
        f"no exceptional space among {len(pool)} candidates makes the right factor regular "
        "with the reverse order law"
    )
