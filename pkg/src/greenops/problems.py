"""Boundary problems, regularity, compatibility conditions and Green's operators.

Finite-dimensional spaces of Stieltjes conditions and of functions are
handled through exact coordinates: a condition is a K-combination of the
functionals ``E[c].D^i`` and ``E[c].A.m`` (``m`` a monomial), a function a
K-combination of monomials ``x^k exp(lam*x)``.  Sums, inclusions and
intersections of spans then reduce to :mod:`greenops.linalg`.
"""

from fractions import Fraction
from functools import cached_property

from . import linalg
from .constants import ZERO as K_ZERO
from .errors import (
    ArityMismatch,
    ExprTypeError,
    InvalidBasis,
    MissingFundamentalSystem,
    NoClosedForm,
    NotRegular,
    NotSemiRegular,
    SingularWronskian,
)
from .funcalg import ExpPoly, Func, P_ONE
from .idop import (
    IDENTITY,
    IdOperator,
    determinant,
    fundamental_right_inverse,
    wronskian_matrix,
)
from .linalg import KMatrix


def _as_func(value):
    if isinstance(value, Func):
        return value
    if isinstance(value, IdOperator):
        return value.as_function()
    if isinstance(value, ExpPoly):
        return Func(value)
    return Func.const(value)


# -- coordinates ---------------------------------------------------------------


def condition_coordinates(cond):
    """Map ``monomial functional -> coefficient`` of a Stieltjes condition."""
    if not cond.is_stieltjes():
        raise ExprTypeError(f"{cond} is not a Stieltjes boundary condition")
    out = {}
    for (c, i), f in cond.local.items():
        out[("L", c, i)] = f.constant_value()
    for (c, kern), f in cond.glob.items():
        if kern.den != P_ONE:
            raise NoClosedForm(f"kernel {kern.text()} of {cond} is not an exponential polynomial")
        out[("G", c, kern)] = f.constant_value()
    return out


def _cond_sort_key(key):
    kind, c, rest = key
    return (c, 0, rest, ()) if kind == "L" else (c, 1, 0, rest.sort_key())


def _cond_from_coordinates(coords):
    local, glob = {}, {}
    for key, v in coords.items():
        if not v:
            continue
        kind, c, rest = key
        if kind == "L":
            local[(c, rest)] = Func.const(v)
        else:
            glob[(c, rest)] = Func.const(v)
    return IdOperator(local=local, glob=glob)


def function_coordinates(f):
    f = _as_func(f)
    if not f.is_exppoly():
        raise NoClosedForm(f"{f} is not an exponential polynomial")
    return dict(f.num.items())


def _func_from_coordinates(coords):
    return Func(ExpPoly(coords))


def cond_coordinates(conds):
    """Common monomial index and coordinate matrix (one row per condition)."""
    rows = [condition_coordinates(c) for c in conds]
    keys = sorted({k for r in rows for k in r}, key=_cond_sort_key)
    return keys, KMatrix([[r.get(k, K_ZERO) for k in keys] for r in rows], len(keys))


def func_coordinates(funcs):
    rows = [function_coordinates(f) for f in funcs]
    keys = sorted({k for r in rows for k in r}, reverse=True)
    return keys, KMatrix([[r.get(k, K_ZERO) for k in keys] for r in rows], len(keys))


# -- spaces --------------------------------------------------------------------


class _Space:
    """Span of finitely many linearly independent elements."""

    _label = ""

    def __init__(self, basis=(), check=True):
        self.basis = tuple(self._convert(b) for b in basis)
        if check:
            keys, M = self._coords(self.basis)
            if linalg.rank(M) != len(self.basis):
                raise InvalidBasis(f"{self._label}(...) elements are linearly dependent")

    @classmethod
    def spanned_by(cls, generators):
        """Space spanned by ``generators``; keeps the first independent ones."""
        gens = [cls._convert(g) for g in generators]
        if not gens:
            return cls((), check=False)
        _, M = cls._coords(gens)
        keep = linalg.pivot_columns(M.transpose())
        return cls([gens[i] for i in keep], check=False)

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __getitem__(self, i):
        return self.basis[i]

    def __add__(self, other):
        return type(self).spanned_by(self.basis + tuple(other))

    def __le__(self, other):
        if not self.basis:
            return True
        _, M = self._coords(tuple(other) + self.basis)
        n = len(tuple(other))
        top = KMatrix(M.rows[:n], M.ncols) if n else KMatrix.zeros(0, M.ncols)
        return linalg.rank(M) == (linalg.rank(top) if n else 0)

    def __ge__(self, other):
        return type(self)(other, check=False) <= self if not isinstance(other, _Space) else other <= self

    def __eq__(self, other):
        if not isinstance(other, _Space):
            return NotImplemented
        return self.dim == other.dim and self <= other

    __hash__ = None

    def contains(self, element):
        return type(self)([element], check=False) <= self

    def reduced(self):
        """Same span, basis in reduced row echelon form over the monomial coordinates."""
        if not self.basis:
            return self
        keys, M = self._coords(self.basis)
        R, _ = linalg.rref_with_transform(M)
        return type(self)(
            [self._build({k: v for k, v in zip(keys, row) if v}) for row in R.rows if any(row)],
            check=False,
        )

    def combination(self, coeffs):
        """``sum coeffs[i] * basis[i]``."""
        keys, M = self._coords(self.basis)
        vec = M.transpose() @ coeffs
        return self._build({k: v for k, v in zip(keys, vec) if v})

    def __str__(self):
        return f"{self._label}(" + ", ".join(str(b) for b in self.basis) + ")"

    def __repr__(self):
        return str(self)


class CondSpace(_Space):
    """Finite-dimensional space of Stieltjes boundary conditions."""

    _label = "BC"

    @staticmethod
    def _convert(b):
        if not isinstance(b, IdOperator):
            raise ExprTypeError(f"{b!r} is not a boundary condition")
        if not b.is_stieltjes():
            raise ExprTypeError(f"{b} is not a Stieltjes boundary condition")
        return b

    @staticmethod
    def _coords(items):
        return cond_coordinates(items)

    @staticmethod
    def _build(coords):
        return _cond_from_coordinates(coords)


class FuncSpace(_Space):
    """Finite-dimensional space of functions (exceptional spaces, kernels)."""

    _label = "ES"

    @staticmethod
    def _convert(b):
        return _as_func(b)

    @staticmethod
    def _coords(items):
        return func_coordinates(items)

    @staticmethod
    def _build(coords):
        return _func_from_coordinates(coords)

    def __and__(self, other):
        return funcspace_intersect(self, other)


def space_sum(a, b):
    return a + b


def space_leq(a, b):
    return a <= b


def funcspace_intersect(a, b):
    """Intersection of two function spaces via the kernel of the stacked coordinates."""
    a, b = FuncSpace.spanned_by(a), FuncSpace.spanned_by(b)
    if not a.dim or not b.dim:
        return FuncSpace()
    keys, M = func_coordinates(a.basis + b.basis)
    cols = M.transpose()  # columns are the functions
    stacked = KMatrix(
        [row[: a.dim] + tuple(-v for v in row[a.dim :]) for row in cols.rows], a.dim + b.dim
    )
    gens = [a.combination(v[: a.dim]) for v in linalg.kernel_basis(stacked)]
    return FuncSpace.spanned_by(gens)


# -- evaluation matrices and condition/function intersections -------------------


def evaluation_matrix(conds, funcs):
    """Matrix ``(beta_i(u_j))``."""
    funcs = [_as_func(u) for u in funcs]
    return KMatrix([[b.functional(u) for u in funcs] for b in conds], len(funcs))


def intersect_primal(U, B):
    """Basis of ``U ∩ B^⊥`` (functions of U annihilated by all conditions in B)."""
    U = list(U)
    if not U:
        return FuncSpace()
    B = list(B)
    if not B:
        return FuncSpace.spanned_by(U)
    M = evaluation_matrix(B, U)
    gens = [_combine_funcs(k, U) for k in linalg.kernel_basis(M)]
    return FuncSpace.spanned_by(gens)


def intersect_dual(B, U):
    """Basis of ``B ∩ U^⊥`` (conditions of B annihilating all of U)."""
    B = list(B)
    if not B:
        return CondSpace()
    U = list(U)
    if not U:
        return CondSpace.spanned_by(B)
    M = evaluation_matrix(B, U)
    gens = [_combine_ops(k, B) for k in linalg.kernel_basis(M.transpose())]
    return CondSpace.spanned_by(gens)


def _combine_funcs(coeffs, funcs):
    out = Func.const(0)
    for c, f in zip(coeffs, funcs):
        if c:
            out = out + _as_func(f).scale(c)
    return out


def _combine_ops(coeffs, ops):
    out = IdOperator()
    for c, op in zip(coeffs, ops):
        if c:
            out = out + Func.const(c) * op
    return out


# -- fundamental systems -------------------------------------------------------


def _divisors(n):
    n = abs(n)
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _rational_roots(coeffs):
    """Rational roots with multiplicity of ``sum coeffs[i] s^i`` (exact Fractions)."""
    poly = [Fraction(c) for c in coeffs]
    while poly and not poly[-1]:
        poly.pop()
    roots = []
    while len(poly) > 1 and not poly[0]:
        roots.append(Fraction(0))
        poly = poly[1:]
    if len(poly) <= 1:
        return roots
    from math import lcm

    scale = lcm(*(c.denominator for c in poly))
    ints = [int(c * scale) for c in poly]
    candidates = sorted(
        {Fraction(s * p, q) for p in _divisors(ints[0]) for q in _divisors(ints[-1]) for s in (1, -1)}
    )
    for r in candidates:
        while len(poly) > 1:
            # synthetic division by (s - r)
            acc, quot = Fraction(0), []
            for c in reversed(poly):
                acc = acc * r + c
                quot.append(acc)
            if quot[-1]:
                break
            roots.append(r)
            poly = list(reversed(quot[:-1]))
    return roots


def characteristic_roots(T):
    """Rational roots, with multiplicity, of the characteristic polynomial of ``T``."""
    if not T.is_monic():
        raise ExprTypeError(f"{T} is not a monic differential operator")
    n = T.order()
    coeffs = []
    for i in range(n + 1):
        c = T.coefficient(i).constant_value()
        if c is None or not c.is_rational():
            raise MissingFundamentalSystem(
                f"{T} does not have rational constant coefficients; supply a fundamental system"
            )
        coeffs.append(c.to_fraction())
    roots = _rational_roots(coeffs)
    if len(roots) != n:
        raise MissingFundamentalSystem(
            f"characteristic polynomial of {T} does not split over the rationals; supply a fundamental system"
        )
    return roots


def constant_coefficient_fundsys(T):
    """Fundamental system of a monic operator with rational constant coefficients
    whose characteristic polynomial splits over the rationals."""
    roots = characteristic_roots(T)
    out = []
    for lam in sorted(set(roots), reverse=True):
        out.extend(Func.monomial(lam, k) for k in range(roots.count(lam)))
    return tuple(out)


def has_auto_fundsys(T):
    try:
        constant_coefficient_fundsys(T)
    except MissingFundamentalSystem:
        return False
    return True


def kernel_functions(T, fundsys=None):
    if fundsys is not None:
        return tuple(_as_func(u) for u in fundsys)
    return constant_coefficient_fundsys(T)


# -- boundary problems ---------------------------------------------------------


class BoundaryProblem:
    """A (generalized) boundary problem ``(T, B, E)``.

    ``T`` is a monic differential operator, ``B`` a space of Stieltjes
    conditions and ``E`` an exceptional space (empty for an ordinary
    problem).  ``fundsys`` is an optional regular fundamental system of ``T``;
    it is computed automatically for constant coefficients.
    """

    def __init__(self, T, conditions, exceptional=(), fundsys=None):
        if not isinstance(T, IdOperator) or not T.is_monic() or T.order() < 1:
            raise ExprTypeError(f"{T} is not a monic differential operator of positive order")
        self.T = T
        self.B = conditions if isinstance(conditions, CondSpace) else CondSpace(conditions)
        self.E = exceptional if isinstance(exceptional, FuncSpace) else FuncSpace(exceptional)
        if fundsys is not None:
            fundsys = tuple(_as_func(u) for u in fundsys)
            if len(fundsys) != T.order():
                raise ArityMismatch(
                    f"order {T.order()} operator needs {T.order()} fundamental solutions"
                )
            if determinant(wronskian_matrix(fundsys)).is_zero():
                raise SingularWronskian("supplied fundamental system has vanishing Wronskian")
        self.fundsys = fundsys

    @property
    def order(self):
        return self.T.order()

    @cached_property
    def kernel(self):
        return kernel_functions(self.T, self.fundsys)

    def has_kernel(self):
        try:
            self.kernel
        except MissingFundamentalSystem:
            return False
        return True

    @cached_property
    def right_inverse(self):
        return fundamental_right_inverse(self.T, self.kernel)

    @cached_property
    def compat(self):
        """Compatibility conditions of ``(T, B)``; depends only on ``T`` and ``B``."""
        return _compat(self)

    def with_exceptional(self, E):
        return BoundaryProblem(self.T, self.B, E, self.fundsys)

    def __eq__(self, other):
        """Same operator, condition span and exceptional span."""
        if not isinstance(other, BoundaryProblem):
            return NotImplemented
        return self.T == other.T and self.B == other.B and self.E == other.E

    __hash__ = None

    def __str__(self):
        fs = "" if self.fundsys is None else ", FS(" + ", ".join(str(u) for u in self.fundsys) + ")"
        if self.E.dim:
            return f"GBP({self.T}, {self.B}, {self.E}{fs})"
        return f"BP({self.T}, {self.B}{fs})"

    def __repr__(self):
        return str(self)


def BP(T, conditions, fundsys=None):
    return BoundaryProblem(T, conditions, (), fundsys)


def GBP(T, conditions, exceptional=(), fundsys=None):
    return BoundaryProblem(T, conditions, exceptional, fundsys)


def is_semi_regular(p):
    M = evaluation_matrix(p.B, p.kernel)
    return linalg.rank(M) == p.order


def compatibility_conditions(T, B=None, fundsys=None):
    """Basis of the compatibility conditions ``(B ∩ (Ker T)^⊥) . T◆``.

    Accepts a :class:`BoundaryProblem` in place of ``T`` (its ``B`` and
    fundamental system are then used).
    """
    if isinstance(T, BoundaryProblem):
        return T.compat
    return _compat(BoundaryProblem(T, B, (), fundsys))


def _compat(p):
    if not is_semi_regular(p):
        raise NotSemiRegular(f"({p.T}, {p.B}) is not semi-regular")
    orth = intersect_dual(p.B, p.kernel)
    gens = [b * p.right_inverse for b in orth]
    return CondSpace.spanned_by(gens).reduced()


def is_regular(p):
    if not is_semi_regular(p):
        return False
    if not p.E.dim:
        return p.B.dim == p.order
    C = compatibility_conditions(p)
    if C.dim != p.E.dim:
        return False
    return linalg.is_invertible(evaluation_matrix(C, p.E))


def admissible_projector(p, compat=None):
    """Projector onto ``T(B^⊥)`` along ``E``: ``1 - sum e_j gamma~_j``."""
    if not p.E.dim:
        return IDENTITY
    C = compat if compat is not None else compatibility_conditions(p)
    gamma_e = evaluation_matrix(C, p.E)
    if not linalg.is_invertible(gamma_e):
        raise NotRegular(f"{p} is not regular: singular evaluation matrix of compatibility conditions")
    inv = linalg.inverse(gamma_e)
    Q = IDENTITY
    for j, e in enumerate(p.E):
        gamma_j = _combine_ops(inv.row(j), C.basis)
        Q = Q - e * gamma_j
    return Q


def greens_operator(p, left_inv=None):
    """Generalized Green's operator ``(1 - sum u_i beta^_i) T◆ Q``.

    ``left_inv`` may supply any left inverse of the evaluation matrix; the
    default is the pivot-row left inverse.
    """
    M = evaluation_matrix(p.B, p.kernel)
    if linalg.rank(M) != p.order:
        raise NotRegular(f"{p} is not semi-regular")
    if p.E.dim:
        C = compatibility_conditions(p)
        if C.dim != p.E.dim:
            raise NotRegular(
                f"{p} is not regular: {C.dim} compatibility conditions but dim E = {p.E.dim}"
            )
        Q = admissible_projector(p, C)
    else:
        if p.B.dim != p.order:
            raise NotRegular(f"{p} is not regular: {p.B.dim} conditions for order {p.order}")
        Q = IDENTITY
    L = linalg.left_inverse(M) if left_inv is None else left_inv
    H = p.right_inverse * Q
    P = IdOperator()
    for i, u in enumerate(p.kernel):
        beta_hat = _combine_ops(L.row(i), p.B.basis)
        P = P + u * beta_hat
    return H - P * H


def greens_operator_regular(p):
    """Green's operator ``(1 - P) T◆`` of a regular problem with ``E = {0}``."""
    if p.E.dim or p.B.dim != p.order:
        raise NotRegular(f"{p} is not a regular problem with dim B = ord T")
    M = evaluation_matrix(p.B, p.kernel)
    if not linalg.is_invertible(M):
        raise NotRegular(f"{p} is not regular: singular evaluation matrix")
    return greens_operator(p)
