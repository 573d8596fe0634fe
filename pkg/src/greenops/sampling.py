"""Random constant-coefficient boundary problems for testing and demos."""

import random
from fractions import Fraction

from .errors import NotSemiRegular
from .funcalg import Func
from .idop import IdOperator
from .problems import (
    BoundaryProblem,
    CondSpace,
    FuncSpace,
    compatibility_conditions,
    evaluation_matrix,
    is_semi_regular,
)
from . import linalg

POINTS = (Fraction(0), Fraction(1, 2), Fraction(1))
ROOTS = (-2, -1, 0, 1, 2)


def operator_from_roots(roots):
    """``(D - r_1)...(D - r_n)``."""
    T = IdOperator.function(Func.const(1))
    for r in roots:
        T = T * (IdOperator.D() - Func.const(r))
    return T


def random_roots(rng, order):
    return [rng.choice(ROOTS) for _ in range(order)]


def random_condition(rng, order):
    """A Stieltjes condition with one to three terms at the sample points.

    Single terms are the most likely, mirroring the usual shape of boundary
    conditions and keeping the constants of the Green's operator small.
    """
    out = IdOperator()
    while out.is_zero():
        for _ in range(rng.choices((1, 2, 3), weights=(6, 3, 1))[0]):
            c = rng.choice(POINTS)
            coeff = Func.const(rng.choice((-1, 1, 1, 2)))
            if c and rng.random() < 0.3:
                kern = Func.monomial(rng.choice((-1, 0, 1)), rng.randint(0, 1))
                term = IdOperator.E(c) * IdOperator.A() * kern
            else:
                term = IdOperator.E(c) * IdOperator.D(rng.randint(0, order))
            out = out + coeff * term
    return out


def random_conditions(rng, order, dim):
    """Independent conditions making ``(T, B)`` likely semi-regular."""
    conds = CondSpace()
    while conds.dim < dim:
        conds = conds + CondSpace([random_condition(rng, order)])
    return conds


def random_exceptional(rng, compat, tries=50):
    """An exceptional space complementing the admissible forcing functions."""
    r = compat.dim
    if r == 0:
        return FuncSpace()
    pool = [Func.monomial(lam, k) for lam in (0, 1, -1, 2) for k in range(3)]
    for _ in range(tries):
        cand = rng.sample(pool, r)
        if linalg.is_invertible(evaluation_matrix(compat, cand)):
            return FuncSpace(cand)
    return None


def _rng(rng):
    return rng if isinstance(rng, random.Random) else random.Random(rng)


def random_problem(rng=None, max_order=3, max_extra=2, roots=None, regular=True, tries=100):
    """A random (by default regular) problem ``(T, B, E)`` with constant coefficients.

    ``T`` has order at most ``max_order`` and rational roots from ``ROOTS``;
    ``dim B <= ord T + max_extra``.  Returns None if no regular triple was
    found within ``tries`` attempts.
    """
    rng = _rng(rng)
    for _ in range(tries):
        rs = list(roots) if roots is not None else random_roots(rng, rng.randint(1, max_order))
        T = operator_from_roots(rs)
        n = len(rs)
        B = random_conditions(rng, n, n + rng.randint(0, max_extra))
        p = BoundaryProblem(T, B)
        if not is_semi_regular(p):
            continue
        if not regular:
            return p
        try:
            E = random_exceptional(rng, compatibility_conditions(p))
        except NotSemiRegular:
            continue
        if E is not None:
            return BoundaryProblem(T, B, E)
    return None


def random_pair(rng=None, max_order=3, max_extra=2):
    """Two random regular problems whose composite has order at most ``max_order``."""
    rng = _rng(rng)
    n1 = rng.randint(1, max_order - 1)
    n2 = rng.randint(1, max_order - n1)
    p1 = random_problem(rng, roots=random_roots(rng, n1), max_extra=max_extra)
    p2 = random_problem(rng, roots=random_roots(rng, n2), max_extra=max_extra)
    if p1 is None or p2 is None:
        return None
    return p1, p2


def random_split(rng, roots):
    """``(T1, T2)`` with ``T1 T2 = T`` for ``T`` with the given roots, both of positive order."""
    rs = list(roots)
    rng.shuffle(rs)
    k = rng.randint(1, len(rs) - 1)
    return operator_from_roots(rs[:k]), operator_from_roots(rs[k:])
