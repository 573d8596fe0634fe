"""Coefficient functions: exponential polynomials and their quotients.

:class:`ExpPoly` is a finite sum ``sum c * x**k * exp(lam*x)`` with ``c`` in K
and ``lam`` rational, stored as a map ``(lam, k) -> c``.  The monomials are
linearly independent over K, so structural equality is equality.

:class:`Func` is a quotient of two ExpPolys.  Quotients are reduced where
that is cheap (exact division, monomial factors, univariate gcds in ``x`` or in
``exp(x/L)``); equality is decided by cross-multiplication, never by the
representation.
"""

from fractions import Fraction
from math import factorial, lcm

from . import _upoly
from .constants import ExpConstant, ZERO as K_ZERO
from .errors import DivisionByZero, NoClosedForm, PoleAtPoint

_K = ExpConstant.coerce


def _frac(v):
    return v if isinstance(v, Fraction) else Fraction(v)


def _fmt_rational(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _monomial_text(lam, k):
    parts = []
    if k == 1:
        parts.append("x")
    elif k > 1:
        parts.append(f"x^{k}")
    if lam:
        if lam == 1:
            parts.append("exp(x)")
        elif lam == -1:
            parts.append("exp(-x)")
        else:
            parts.append(f"exp({_fmt_rational(lam)}*x)")
    return "*".join(parts)


def signed_term_text(c, lam, k):
    """Return ``(sign, body)`` for the term ``c * x**k * exp(lam*x)``."""
    mono = _monomial_text(lam, k)
    if c.is_monomial():
        sign = c.sign_hint()
        mag = -c if sign < 0 else c
        coef = "" if mag == 1 else str(mag)
    else:
        sign, coef = 1, f"({c})"
    if coef and mono:
        return sign, f"{coef}*{mono}"
    return sign, coef or mono or "1"


def join_signed(items):
    if not items:
        return "0"
    sign, body = items[0]
    out = ("-" if sign < 0 else "") + body
    for sign, body in items[1:]:
        out += (" - " if sign < 0 else " + ") + body
    return out


class ExpPoly:
    """Immutable exponential polynomial."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        for (lam, k), c in (terms or {}).items():
            c = _K(c)
            if c:
                clean[(_frac(lam), int(k))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms):
        obj = object.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, lam=0, k=0, c=1):
        return cls({(lam, k): c})

    @classmethod
    def from_coeffs(cls, coeffs, lam=0):
        """Polynomial in ``x`` (lowest degree first) times ``exp(lam*x)``."""
        return cls({(lam, k): c for k, c in enumerate(coeffs)})

    # -- structure -----------------------------------------------------

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def frequencies(self):
        return {lam for lam, _ in self._terms}

    def degree(self):
        return max((k for _, k in self._terms), default=-1)

    def min_degree(self):
        return min(k for _, k in self._terms)

    def leading(self):
        key = max(self._terms)
        return key, self._terms[key]

    def constant_value(self):
        """The value as an element of K, or None if not constant."""
        if not self._terms:
            return K_ZERO
        if len(self._terms) == 1 and (0, 0) in self._terms:
            return self._terms[(0, 0)]
        return None

    def by_frequency(self):
        """``lam -> [c_0, c_1, ...]`` (dense coefficient lists in ``x``)."""
        out = {}
        for (lam, k), c in self._terms.items():
            out.setdefault(lam, {})[k] = c
        return {
            lam: [d.get(i, K_ZERO) for i in range(max(d) + 1)] for lam, d in out.items()
        }

    @classmethod
    def from_frequency(cls, table):
        return cls({(lam, k): c for lam, p in table.items() for k, c in enumerate(p)})

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        out = dict(self._terms)
        for key, c in other._terms.items():
            v = out.get(key)
            v = c if v is None else v + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return ExpPoly._wrap(out)

    def __neg__(self):
        return ExpPoly._wrap({key: -c for key, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            out = {}
            for (la, ka), ca in self._terms.items():
                for (lb, kb), cb in other._terms.items():
                    key = (la + lb, ka + kb)
                    v = out.get(key)
                    out[key] = ca * cb if v is None else v + ca * cb
            return ExpPoly._wrap({key: c for key, c in out.items() if c})
        return self.scale(other)

    def scale(self, c):
        c = _K(c)
        if not c:
            return ExpPoly._wrap({})
        if c == 1:
            return self
        return ExpPoly._wrap({key: v * c for key, v in self._terms.items()})

    def shift(self, mu):
        """Multiply by ``exp(mu*x)``."""
        if not mu:
            return self
        return ExpPoly._wrap({(lam + mu, k): c for (lam, k), c in self._terms.items()})

    def lower_degree(self, j):
        """Divide by ``x**j`` (caller guarantees divisibility)."""
        if not j:
            return self
        return ExpPoly._wrap({(lam, k - j): c for (lam, k), c in self._terms.items()})

    def derivative(self):
        out = {}
        for (lam, k), c in self._terms.items():
            if k:
                key = (lam, k - 1)
                out[key] = out.get(key, K_ZERO) + c * k
            if lam:
                key = (lam, k)
                out[key] = out.get(key, K_ZERO) + c * lam
        return ExpPoly._wrap({key: c for key, c in out.items() if c})

    def integral(self):
        """Antiderivative vanishing at 0."""
        out = {}

        def put(key, c):
            v = out.get(key, K_ZERO) + c
            out[key] = v

        for (lam, n), c in self._terms.items():
            if not lam:
                put((lam, n + 1), c / (n + 1))
                continue
            # int_0^x t^n e^{lam t} dt = P(x) e^{lam x} - P(0)
            fn = factorial(n)
            for j in range(n + 1):
                coef = Fraction((-1) ** j * fn, factorial(n - j)) / lam ** (j + 1)
                put((lam, n - j), c * coef)
            put((Fraction(0), 0), -(c * (Fraction((-1) ** n * fn) / lam ** (n + 1))))
        return ExpPoly._wrap({key: c for key, c in out.items() if c})

    def evaluate(self, point):
        point = _frac(point)
        total = K_ZERO
        for (lam, k), c in self._terms.items():
            total = total + c * ExpConstant.exp(lam * point, point ** k)
        return total

    def exact_div(self, other):
        """``self / other`` if the quotient is an ExpPoly, else None."""
        if not other._terms:
            raise DivisionByZero("division by the zero function")
        if not self._terms:
            return self
        if len(other._terms) == 1:
            ((mu, j), c), = other._terms.items()
            if self.min_degree() < j:
                return None
            return self.lower_degree(j).shift(-mu).scale(1 / c)
        B = other.by_frequency()
        top = max(B)
        lower = min(self.frequencies()) - min(B)
        R = self.by_frequency()
        Q = {}
        while R:
            lr = max(R)
            lq = lr - top
            if lq < lower:
                return None
            qp = _upoly.exact_div(R[lr], B[top])
            if qp is None:
                return None
            Q[lq] = qp
            for lam, p in B.items():
                key = lam + lq
                rest = _upoly.sub(R.get(key, []), _upoly.mul(qp, p))
                if rest:
                    R[key] = rest
                else:
                    R.pop(key, None)
        return ExpPoly.from_frequency(Q)

    # -- comparison ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, ExpPoly):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def sort_key(self):
        return tuple(sorted((lam, k, str(c)) for (lam, k), c in self._terms.items()))

    def signed_terms(self):
        keys = sorted(self._terms, reverse=True)
        return [signed_term_text(self._terms[key], *key) for key in keys]

    def __str__(self):
        return join_signed(self.signed_terms())

    def __repr__(self):
        return f"ExpPoly({str(self)!r})"


P_ZERO = ExpPoly()
P_ONE = ExpPoly.monomial()


def _pure_x(p):
    return p.frequencies() == {0}


def _pure_exp(p):
    return all(k == 0 for _, k in p._terms)


def _exp_gcd(num, den):
    """Cancel the gcd of two polynomials in ``exp(x/L)``; returns the pair."""
    L = lcm(*(lam.denominator for lam in num.frequencies() | den.frequencies()))
    nmin, dmin = min(num.frequencies()), min(den.frequencies())

    def dense(p, base):
        out = [K_ZERO] * (int((max(p.frequencies()) - base) * L) + 1)
        for (lam, _), c in p.items():
            out[int((lam - base) * L)] = c
        return out

    n, d = dense(num, nmin), dense(den, dmin)
    g = _upoly.gcd(list(n), list(d))
    if len(g) <= 1:
        return num, den
    n, d = _upoly.exact_div(n, g), _upoly.exact_div(d, g)
    num = ExpPoly({(nmin + Fraction(i, L), 0): c for i, c in enumerate(n)})
    den = ExpPoly({(dmin + Fraction(i, L), 0): c for i, c in enumerate(d)})
    return num, den


def _x_gcd(num, den):
    n, d = num.by_frequency()[0], den.by_frequency()[0]
    g = _upoly.gcd(list(n), list(d))
    if len(g) <= 1:
        return num, den
    return (
        ExpPoly.from_coeffs(_upoly.exact_div(n, g)),
        ExpPoly.from_coeffs(_upoly.exact_div(d, g)),
    )


def _reduce(num, den):
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return P_ZERO, P_ONE
    if den == P_ONE:
        return num, den
    if len(den) == 1:
        ((mu, j), c), = den.items()
        num = num.shift(-mu).scale(1 / c)
        j0 = min(j, num.min_degree())
        return num.lower_degree(j0), (ExpPoly.monomial(0, j - j0) if j > j0 else P_ONE)
    q = num.exact_div(den)
    if q is not None:
        return q, P_ONE
    j0 = min(num.min_degree(), den.min_degree())
    num, den = num.lower_degree(j0), den.lower_degree(j0)
    if _pure_x(num) and _pure_x(den):
        num, den = _x_gcd(num, den)
    elif _pure_exp(num) and _pure_exp(den):
        num, den = _exp_gcd(num, den)
    else:
        inv = den.exact_div(num)
        if inv is not None:
            num, den = P_ONE, inv
    if len(den) == 1:
        return _reduce(num, den)
    mu = min(den.frequencies())
    _, lead = den.shift(-mu).leading()
    return num.shift(-mu).scale(1 / lead), den.shift(-mu).scale(1 / lead)


def _as_func(value):
    if isinstance(value, Func):
        return value
    if isinstance(value, ExpPoly):
        return Func(value)
    return Func.const(value)


def _operand(value):
    """Coerce for binary operators; None for foreign types."""
    if isinstance(value, (Func, ExpPoly, ExpConstant, int, Fraction)):
        return _as_func(value)
    return None


class Func:
    """Element of the coefficient algebra F (a quotient of ExpPolys)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None or den is P_ONE:
            self.num, self.den = num, P_ONE
        else:
            self.num, self.den = _reduce(num, den)

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def const(cls, c):
        return cls(ExpPoly.monomial(0, 0, c))

    @classmethod
    def x(cls, k=1):
        return cls(ExpPoly.monomial(0, k))

    @classmethod
    def exp(cls, lam, c=1):
        return cls(ExpPoly.monomial(lam, 0, c))

    @classmethod
    def monomial(cls, lam=0, k=0, c=1):
        return cls(ExpPoly.monomial(lam, k, c))

    @classmethod
    def poly(cls, coeffs):
        """Polynomial in ``x`` from coefficients, lowest degree first."""
        return cls(ExpPoly.from_coeffs(coeffs))

    # -- structure -----------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_exppoly(self):
        return self.den == P_ONE

    def constant_value(self):
        """Value in K if this is a constant function, else None."""
        return self.num.constant_value() if self.den == P_ONE else None

    def is_constant(self):
        return self.constant_value() is not None

    def frequencies(self):
        return self.num.frequencies() | self.den.frequencies()

    def is_single_term(self):
        return len(self.num) == 1

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = _operand(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            if self.den == P_ONE:
                return Func._raw(self.num + other.num, P_ONE)
            return Func(self.num + other.num, self.den)
        return Func(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Func._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _operand(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _operand(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _operand(other)
        if other is None:
            return NotImplemented
        if self.den == P_ONE and other.den == P_ONE:
            return Func._raw(self.num * other.num, P_ONE)
        return Func(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def scale(self, c):
        return Func._raw(self.num.scale(c), self.den)

    def reciprocal(self):
        if self.is_zero():
            raise DivisionByZero("reciprocal of the zero function")
        return Func(self.den, self.num)

    def __truediv__(self, other):
        other = _operand(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by the zero function")
        return Func(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _operand(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = Func.const(1)
        for _ in range(n):
            out = out * self
        return out

    def diff(self, times=1):
        f = self
        for _ in range(times):
            if f.den == P_ONE:
                f = Func._raw(f.num.derivative(), P_ONE)
            else:
                n, d = f.num, f.den
                f = Func(n.derivative() * d - n * d.derivative(), d * d)
        return f

    def integrate(self):
        """Antiderivative with value 0 at x = 0."""
        if self.den != P_ONE:
            raise NoClosedForm(f"no closed-form antiderivative for {self}")
        return Func._raw(self.num.integral(), P_ONE)

    def evaluate(self, point):
        den = self.den.evaluate(point)
        if not den:
            raise PoleAtPoint(f"{self} has a pole at x = {point}")
        return self.num.evaluate(point) / den

    # -- comparison ----------------------------------------------------

    def __eq__(self, other):
        other = _operand(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def signed_text(self):
        """``(sign, body, atomic)``; atomic bodies need no parentheses before ``.``."""
        if len(self.num) == 1:
            (key, c), = self.num.items()
            sign, body = signed_term_text(c, *key)
            if self.den != P_ONE:
                den = str(self.den)
                body = f"{body}/({den})" if len(self.den) > 1 else f"{body}/{den}"
            return sign, body, True
        return 1, f"({self})", False

    def __str__(self):
        num = str(self.num)
        if self.den == P_ONE:
            return num
        if len(self.num) > 1:
            num = f"({num})"
        den = str(self.den)
        return f"{num}/({den})" if len(self.den) > 1 else f"{num}/{den}"

    def __repr__(self):
        return f"Func({str(self)!r})"


X = Func.x()
ONE = Func.const(1)
ZERO = Func(P_ZERO)


def fn_differentiate(f):
    return f.diff()


def fn_integrate(f):
    return f.integrate()


def fn_evaluate(f, c):
    return f.evaluate(c)


def fn_mul(f, g):
    return _as_func(f) * _as_func(g)


def fn_add(f, g):
    return _as_func(f) + _as_func(g)
