"""Integro-differential operators in normal form.

An operator is stored as the direct sum of its differential, integral and
boundary parts::

    sum f_i D^i  +  sum f_k A g_k  +  sum f_{c,i} E[c] D^i  +  sum f_{c,k} E[c] A g_k

Here ``A`` is integration from 0, ``E[c]`` evaluation at the rational point
``c``.  Right factors ``g_k`` of integrals are expanded on the monomial basis
``x^k exp(lam*x)`` (over a common denominator when they are quotients) and
keyed by that monomial, so each part is a map ``key -> left coefficient``
and the normal form is unique.  ``E[0] A`` is zero and never stored.

Composition is computed by letting the factors of the left operator act on
the right operand one generator at a time, using

    D f = f D + f'             D A = 1
    A f D = f - f(0) E[0] - A f'
    A f A = F A - A F          (F the antiderivative of f with F(0) = 0)
    A f E[c] = F E[c]          E[c] f = f(c) E[c]      E[c] E[d] = E[d]
"""

from fractions import Fraction
from math import comb

from .constants import ExpConstant
from .funcalg import ExpPoly, Func, ONE, P_ONE, ZERO, _monomial_text, join_signed
from .errors import ArityMismatch, ExprTypeError, SingularWronskian


class Kernel(tuple):
    """Hashable integral kernel ``x^k exp(lam*x) / den``."""

    __slots__ = ()

    def __new__(cls, lam, k, den=P_ONE):
        return tuple.__new__(cls, (Fraction(lam), int(k), den))

    @property
    def lam(self):
        return self[0]

    @property
    def k(self):
        return self[1]

    @property
    def den(self):
        return self[2]

    def func(self):
        return Func(ExpPoly.monomial(self[0], self[1]), self[2])

    def sort_key(self):
        den = self[2]
        return (0 if den == P_ONE else 1, den.sort_key(), self[0], self[1])

    def text(self):
        mono = _monomial_text(self[0], self[1]) or "1"
        den = self[2]
        if den == P_ONE:
            return mono
        return f"{mono}/({den})" if len(den) > 1 else f"{mono}/{den}"

    def __repr__(self):
        return f"Kernel({self.text()!r})"


KERNEL_ONE = Kernel(0, 0)


def split_kernel(g):
    """Expand a function into ``[(Kernel, constant), ...]``."""
    return [(Kernel(lam, k, g.den), c) for (lam, k), c in g.num.items()]


def _as_func(value):
    if isinstance(value, Func):
        return value
    if isinstance(value, ExpPoly):
        return Func(value)
    return Func.const(value)


class _Acc:
    """Mutable accumulator of normal-form terms."""

    __slots__ = ("diff", "integ", "local", "glob")

    def __init__(self):
        self.diff, self.integ, self.local, self.glob = {}, {}, {}, {}

    @staticmethod
    def _put(table, key, f):
        if f.is_zero():
            return
        old = table.get(key)
        if old is None:
            table[key] = f
            return
        new = old + f
        if new.is_zero():
            del table[key]
        else:
            table[key] = new

    def add_diff(self, i, f):
        self._put(self.diff, i, f)

    def add_integral(self, f, g):
        """Add ``f A g`` for arbitrary ``g``."""
        for kern, c in split_kernel(g):
            self._put(self.integ, kern, f.scale(c))

    def add_integ(self, kern, f):
        self._put(self.integ, kern, f)

    def add_local(self, c, i, f):
        self._put(self.local, (c, i), f)

    def add_glob(self, c, kern, f):
        if c != 0:
            self._put(self.glob, (c, kern), f)

    def add(self, op):
        for i, f in op.diff.items():
            self._put(self.diff, i, f)
        for key, f in op.integ.items():
            self._put(self.integ, key, f)
        for key, f in op.local.items():
            self._put(self.local, key, f)
        for key, f in op.glob.items():
            self._put(self.glob, key, f)

    def build(self):
        return IdOperator._wrap(self.diff, self.integ, self.local, self.glob)


def _with_coeff(f, atom):
    """Signed text for ``f . atom``."""
    if f == 1:
        return 1, atom
    if f == -1:
        return -1, atom
    sign, body, atomic = f.signed_text()
    if not atomic:
        return 1, f"{body}.{atom}"
    if body == "1":
        return sign, atom
    return sign, body + ("*" if f.is_constant() else ".") + atom


def _fmt_point(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class IdOperator:
    """Immutable integro-differential operator in normal form.

    ``*`` is composition; functions and scalars act as multiplication operators.
    """

    __slots__ = ("diff", "integ", "local", "glob")

    def __init__(self, diff=None, integ=None, local=None, glob=None):
        acc = _Acc()
        for i, f in (diff or {}).items():
            acc.add_diff(int(i), _as_func(f))
        for g, f in (integ or {}).items():
            if isinstance(g, Kernel):
                acc.add_integ(g, _as_func(f))
            else:
                acc.add_integral(_as_func(f), _as_func(g))
        for (c, i), f in (local or {}).items():
            acc.add_local(Fraction(c), int(i), _as_func(f))
        for (c, g), f in (glob or {}).items():
            if isinstance(g, Kernel):
                acc.add_glob(Fraction(c), g, _as_func(f))
            else:
                for kern, k in split_kernel(_as_func(g)):
                    acc.add_glob(Fraction(c), kern, _as_func(f).scale(k))
        self.diff, self.integ, self.local, self.glob = acc.diff, acc.integ, acc.local, acc.glob

    @classmethod
    def _wrap(cls, diff, integ, local, glob):
        obj = object.__new__(cls)
        obj.diff, obj.integ, obj.local, obj.glob = diff, integ, local, glob
        return obj

    # -- constructors --------------------------------------------------

    @classmethod
    def function(cls, f):
        return cls(diff={0: _as_func(f)})

    @classmethod
    def D(cls, order=1):
        return cls(diff={order: ONE})

    @classmethod
    def A(cls):
        return cls(integ={KERNEL_ONE: ONE})

    @classmethod
    def E(cls, point):
        return cls(local={(point, 0): ONE})

    @classmethod
    def differential(cls, coeffs):
        """``sum coeffs[i] D^i`` from a list indexed by order."""
        return cls(diff=dict(enumerate(coeffs)))

    # -- structure -----------------------------------------------------

    def is_zero(self):
        return not (self.diff or self.integ or self.local or self.glob)

    def __bool__(self):
        return not self.is_zero()

    def order(self):
        return max(self.diff, default=-1)

    def is_differential(self):
        return not (self.integ or self.local or self.glob)

    def is_function(self):
        return self.is_differential() and set(self.diff) <= {0}

    def as_function(self):
        if not self.is_function():
            raise ExprTypeError(f"{self} is not a function")
        return self.diff.get(0, ZERO)

    def is_monic(self):
        return self.is_differential() and bool(self.diff) and self.diff[self.order()] == 1

    def coefficient(self, i):
        return self.diff.get(i, ZERO)

    def is_boundary(self):
        return not (self.diff or self.integ)

    def is_stieltjes(self):
        return self.is_boundary() and all(
            f.is_constant() for f in (*self.local.values(), *self.glob.values())
        )

    def frequencies(self):
        out = set()
        for table in (self.diff, self.integ, self.local, self.glob):
            for key, f in table.items():
                out |= f.frequencies()
                kern = key if isinstance(key, Kernel) else (key[1] if isinstance(key, tuple) else None)
                if isinstance(kern, Kernel):
                    out.add(kern.lam)
                    out |= kern.den.frequencies()
        return out

    # -- ring operations -----------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        acc = _Acc()
        acc.add(self)
        acc.add(other)
        return acc.build()

    __radd__ = __add__

    def __neg__(self):
        neg = lambda t: {k: -f for k, f in t.items()}
        return IdOperator._wrap(neg(self.diff), neg(self.integ), neg(self.local), neg(self.glob))

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, IdOperator):
            return op_multiply(self, other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return op_multiply(self, other)

    def __rmul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return op_multiply(other, self)

    def __truediv__(self, other):
        """Division by a nonzero constant."""
        if isinstance(other, IdOperator):
            return NotImplemented
        if isinstance(other, Func):
            other = other.constant_value()
            if other is None:
                return NotImplemented
        try:
            inv = 1 / ExpConstant.coerce(other)
        except TypeError:
            return NotImplemented
        return self * IdOperator.function(Func.const(inv))

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = IdOperator.function(ONE)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return all(
            a.keys() == b.keys() and all(a[k] == b[k] for k in a)
            for a, b in (
                (self.diff, other.diff),
                (self.integ, other.integ),
                (self.local, other.local),
                (self.glob, other.glob),
            )
        )

    __hash__ = None

    # -- action --------------------------------------------------------

    def apply(self, f):
        """Apply the operator to the function ``f``."""
        f = _as_func(f)
        derivs = [f]

        def deriv(i):
            while len(derivs) <= i:
                derivs.append(derivs[-1].diff())
            return derivs[i]

        antiderivs = {}

        def anti(kern):
            if kern not in antiderivs:
                antiderivs[kern] = (kern.func() * f).integrate()
            return antiderivs[kern]

        out = ZERO
        for i, h in self.diff.items():
            out = out + h * deriv(i)
        for kern, h in self.integ.items():
            out = out + h * anti(kern)
        for (c, i), h in self.local.items():
            out = out + h.scale(deriv(i).evaluate(c))
        for (c, kern), h in self.glob.items():
            out = out + h.scale(anti(kern).evaluate(c))
        return out

    __call__ = apply

    def functional(self, f):
        """Value in K of a boundary operator with constant coefficients."""
        value = self.apply(f).constant_value()
        if value is None:
            raise ExprTypeError(f"{self} is not a linear functional")
        return value

    # -- printing ------------------------------------------------------

    def signed_terms(self):
        items = []
        for i in sorted(self.diff, reverse=True):
            f = self.diff[i]
            if i == 0:
                if f.is_exppoly():
                    items.extend(f.num.signed_terms())
                else:
                    sign, body, _ = f.signed_text()
                    items.append((sign, body if body[0] != "(" else str(f)))
            else:
                items.append(_with_coeff(f, "D" if i == 1 else f"D^{i}"))
        for kern in sorted(self.integ, key=Kernel.sort_key):
            atom = "A" if kern == KERNEL_ONE else f"A.{kern.text()}"
            items.append(_with_coeff(self.integ[kern], atom))
        points = sorted({c for c, _ in self.local} | {c for c, _ in self.glob})
        for c in points:
            ev = f"E[{_fmt_point(c)}]"
            for (d, i) in sorted(k for k in self.local if k[0] == c):
                atom = ev if i == 0 else (f"{ev}.D" if i == 1 else f"{ev}.D^{i}")
                items.append(_with_coeff(self.local[(d, i)], atom))
            for key in sorted((k for k in self.glob if k[0] == c), key=lambda k: k[1].sort_key()):
                kern = key[1]
                atom = f"{ev}.A" if kern == KERNEL_ONE else f"{ev}.A.{kern.text()}"
                items.append(_with_coeff(self.glob[key], atom))
        return items

    def __str__(self):
        return join_signed(self.signed_terms())

    def __repr__(self):
        return f"IdOperator({str(self)!r})"


def _coerce(value):
    if isinstance(value, IdOperator):
        return value
    if isinstance(value, (Func, ExpPoly, ExpConstant, int, Fraction)):
        return IdOperator.function(value)
    return NotImplemented


# -- left actions of the generators ------------------------------------------


def _lmul_func(f, op):
    if f == 1:
        return op
    scale = lambda t: {k: f * h for k, h in t.items()}
    acc = _Acc()
    for table, target in (
        (scale(op.diff), acc.diff),
        (scale(op.integ), acc.integ),
        (scale(op.local), acc.local),
        (scale(op.glob), acc.glob),
    ):
        for key, h in table.items():
            acc._put(target, key, h)
    return acc.build()


def _lmul_diff(op):
    acc = _Acc()
    for j, h in op.diff.items():
        acc.add_diff(j, h.diff())
        acc.add_diff(j + 1, h)
    for kern, h in op.integ.items():
        acc.add_integ(kern, h.diff())
        acc.add_diff(0, h * kern.func())
    for (c, i), h in op.local.items():
        acc.add_local(c, i, h.diff())
    for (c, kern), h in op.glob.items():
        acc.add_glob(c, kern, h.diff())
    return acc.build()


def _lmul_int(op):
    acc = _Acc()
    for j, h in op.diff.items():
        cur = h
        while j >= 1 and cur:
            acc.add_diff(j - 1, cur)
            v = cur.evaluate(0)
            if v:
                acc.add_local(Fraction(0), j - 1, Func.const(-v))
            cur = -cur.diff()
            j -= 1
        if j == 0 and cur:
            acc.add_integral(ONE, cur)
    for kern, h in op.integ.items():
        H = h.integrate()
        acc.add_integ(kern, H)
        acc.add_integral(ONE, -(H * kern.func()))
    for (c, i), h in op.local.items():
        acc.add_local(c, i, h.integrate())
    for (c, kern), h in op.glob.items():
        acc.add_glob(c, kern, h.integrate())
    return acc.build()


def _lmul_eval(point, op):
    acc = _Acc()
    for j, h in op.diff.items():
        acc.add_local(point, j, Func.const(h.evaluate(point)))
    if point != 0:
        for kern, h in op.integ.items():
            acc.add_glob(point, kern, Func.const(h.evaluate(point)))
    for (c, i), h in op.local.items():
        acc.add_local(c, i, Func.const(h.evaluate(point)))
    for (c, kern), h in op.glob.items():
        acc.add_glob(c, kern, Func.const(h.evaluate(point)))
    return acc.build()


def op_multiply(a, b):
    """Normal form of the composition ``a . b``."""
    dpows = [b]

    def dpow(i):
        while len(dpows) <= i:
            dpows.append(_lmul_diff(dpows[-1]))
        return dpows[i]

    integrals = {}

    def integral(kern):
        if kern not in integrals:
            integrals[kern] = _lmul_int(_lmul_func(kern.func(), b))
        return integrals[kern]

    acc = _Acc()
    for i, f in a.diff.items():
        acc.add(_lmul_func(f, dpow(i)))
    for kern, f in a.integ.items():
        acc.add(_lmul_func(f, integral(kern)))
    for (c, i), f in a.local.items():
        acc.add(_lmul_func(f, _lmul_eval(c, dpow(i))))
    for (c, kern), f in a.glob.items():
        acc.add(_lmul_func(f, _lmul_eval(c, integral(kern))))
    return acc.build()


def op_apply(a, f):
    return a.apply(f)


def op_is_zero(a):
    return a.is_zero()


# -- variation of constants ----------------------------------------------------


def determinant(rows):
    """Determinant of a square matrix over a commutative ring (Laplace, memoized)."""
    n = len(rows)
    if n == 0:
        return ONE
    memo = {}

    def det(r, cols):
        if r == n:
            return ONE
        if cols in memo:
            return memo[cols]
        total = None
        for pos, c in enumerate(cols):
            entry = rows[r][c]
            if not entry:
                continue
            term = entry * det(r + 1, cols[:pos] + cols[pos + 1 :])
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        out = total if total is not None else rows[0][0] - rows[0][0]
        memo[cols] = out
        return out

    return det(0, tuple(range(n)))


def wronskian_matrix(fundsys):
    """Rows are successive derivatives: entry (i, j) is ``u_j^(i)``."""
    fs = [_as_func(u) for u in fundsys]
    n = len(fs)
    rows = [fs]
    for _ in range(n - 1):
        rows.append([u.diff() for u in rows[-1]])
    return rows


def fundamental_right_inverse(T, fundsys):
    """The right inverse of ``T`` solving the initial value problem at 0.

    ``sum u_i A (d_i / d)`` with ``d`` the Wronskian determinant and ``d_i`` the
    determinant after replacing column ``i`` by the last unit vector.
    """
    if not T.is_monic():
        raise ExprTypeError(f"{T} is not a monic differential operator")
    n = T.order()
    if len(fundsys) != n:
        raise ArityMismatch(f"order {n} operator needs {n} fundamental solutions, got {len(fundsys)}")
    W = wronskian_matrix(fundsys)
    d = determinant(W)
    if d.is_zero():
        raise SingularWronskian("Wronskian determinant vanishes")
    acc = _Acc()
    for i, u in enumerate(W[0]):
        minor = [row[:i] + row[i + 1 :] for row in W[:-1]]
        di = determinant(minor)
        if (n - 1 + i) % 2:
            di = -di
        acc.add_integral(u, di / d)
    return acc.build()


D = IdOperator.D()
A = IdOperator.A()
IDENTITY = IdOperator.function(ONE)


def E(point):
    return IdOperator.E(Fraction(point))


def binomial_leibniz(f, i):
    """``D^i . f`` expanded by Leibniz' rule (reference for tests)."""
    return IdOperator(diff={i - k: comb(i, k) * f.diff(k) for k in range(i + 1)})
