"""The scalar field K.

Elements are quotients of finite rational combinations of ``exp(r)`` with
``r`` rational.  Distinct ``exp(r)`` are linearly independent over the
rationals, so with ``z = exp(1/L)`` every element is a rational function in
``z`` and the zero test is purely syntactic.

Canonical form: the denominator is a polynomial in ``z`` with nonzero
constant term and leading coefficient 1, coprime to the numerator; any
monomial factor lives in the numerator.  A denominator equal to ``{0: 1}``
means the value is a Laurent polynomial, which is the common case and is
kept on a fast path.
"""

from fractions import Fraction
from functools import lru_cache
from math import exp as _fexp

from gmpy2 import lcm as _zlcm, mpq

from . import _upoly
from .errors import DivisionByZero

# Exponents and coefficients are stored as gmpy2 rationals; the public
# accessors hand out Fractions.
_MPQ = type(mpq(0))
_ONE_DEN = {mpq(0): mpq(1)}


def _as_q(value):
    if isinstance(value, _MPQ):
        return value
    if isinstance(value, (int, Fraction)):
        return mpq(value)
    if isinstance(value, str):
        return mpq(Fraction(value))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def _frac(q):
    return Fraction(int(q.numerator), int(q.denominator))


def _lcm(values):
    out = 1
    for v in values:
        out = _zlcm(out, v)
    return int(out)


def _lmul(a, b):
    if len(a) * len(b) > 24:
        return _lmul_dense(a, b)
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


@lru_cache(maxsize=64)
def _grid(L, n):
    """Exponents ``i/L`` for ``0 <= i < n``."""
    return tuple(mpq(i, L) for i in range(n))


def _lmul_dense(a, b):
    L = _lcm(e.denominator for e in (*a, *b))
    amin, bmin = min(a), min(b)
    prod = _upoly.mul_rational(_to_poly(a, amin, L), _to_poly(b, bmin, L))
    base = amin + bmin
    grid = _grid(L, len(prod))
    return {base + grid[i]: c for i, c in enumerate(prod) if c}


def _ladd(a, b, sign=1):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _is_one(den):
    return den is _ONE_DEN or (len(den) == 1 and den.get(0) == 1)


def _to_poly(d, base, L):
    out = [mpq(0)] * (int((max(d) - base) * L) + 1)
    for e, c in d.items():
        out[int((e - base) * L)] = c
    return out


def _normalize(num, den, coprime=False):
    num = {e: c for e, c in num.items() if c}
    if not num:
        return _raw({}, _ONE_DEN)
    if len(den) == 1:
        (s, d), = den.items()
        if s == 0 and d == 1:
            return _raw(num, _ONE_DEN)
        return _raw({e - s: c / d for e, c in num.items()}, _ONE_DEN)
    L = _lcm(e.denominator for e in (*num, *den))
    nmin, dmin = min(num), min(den)
    n = _to_poly(num, nmin, L)
    d = _to_poly(den, dmin, L)
    if not coprime and len(n) > 1:
        n, d = _upoly.cancel(n, d)
    lead = d[-1]
    shift = nmin - dmin
    grid = _grid(L, max(len(n), len(d)))
    if lead == 1:
        new_num = {shift + grid[i]: c for i, c in enumerate(n) if c}
    else:
        new_num = {shift + grid[i]: c / lead for i, c in enumerate(n) if c}
    if len(d) == 1:
        return _raw(new_num, _ONE_DEN)
    if lead == 1:
        new_den = {grid[i]: c for i, c in enumerate(d) if c}
    else:
        new_den = {grid[i]: c / lead for i, c in enumerate(d) if c}
    return _raw(new_num, new_den)


def _raw(num, den):
    obj = object.__new__(ExpConstant)
    obj._num = num
    obj._den = den
    obj._hash = None
    return obj


def _fmt_rational(q):
    return str(q)


def _fmt_laurent(d):
    parts = []
    for e in sorted(d, reverse=True):
        c = d[e]
        if e == 0:
            body = _fmt_rational(abs(c))
        else:
            atom = f"exp({_fmt_rational(e)})"
            body = atom if abs(c) == 1 else f"{_fmt_rational(abs(c))}*{atom}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class ExpConstant:
    """Exact element of K.  Immutable and hashable."""

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, value=0):
        q = _as_q(value)
        self._num = {mpq(0): q} if q else {}
        self._den = _ONE_DEN
        self._hash = None

    @classmethod
    def exp(cls, r, coeff=1):
        """``coeff * exp(r)``."""
        r, coeff = _as_q(r), _as_q(coeff)
        return _raw({r: coeff} if coeff else {}, _ONE_DEN)

    @classmethod
    def from_maps(cls, num, den=None):
        """Build from exponent -> coefficient maps (normalized on the way in)."""
        num = {_as_q(e): _as_q(c) for e, c in num.items()}
        if den is None:
            return _normalize(num, _ONE_DEN)
        den = {_as_q(e): _as_q(c) for e, c in den.items() if c}
        if not den:
            raise DivisionByZero("zero denominator")
        return _normalize(num, den)

    @staticmethod
    def coerce(value):
        return value if isinstance(value, ExpConstant) else ExpConstant(value)

    # -- structure -----------------------------------------------------

    @property
    def numerator(self):
        return {_frac(e): _frac(c) for e, c in self._num.items()}

    @property
    def denominator(self):
        return {_frac(e): _frac(c) for e, c in self._den.items()}

    def is_zero(self):
        return not self._num

    def __bool__(self):
        return bool(self._num)

    def is_rational(self):
        return _is_one(self._den) and (not self._num or set(self._num) == {0})

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return _frac(self._num.get(0, mpq(0)))

    def is_monomial(self):
        """Single term ``c*exp(r)`` (including plain rationals)."""
        return _is_one(self._den) and len(self._num) <= 1

    def is_laurent(self):
        return _is_one(self._den)

    def sign_hint(self):
        """-1 if the printed form starts with a minus sign, else 1."""
        if not self._num:
            return 1
        return -1 if self._num[max(self._num)] < 0 else 1

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ExpConstant):
            try:
                other = ExpConstant(other)
            except TypeError:
                return NotImplemented
        if not other._num:
            return self
        if not self._num:
            return other
        one_s, one_o = _is_one(self._den), _is_one(other._den)
        if one_s and one_o:
            return _raw(_ladd(self._num, other._num), _ONE_DEN)
        if one_s or one_o:
            # a + b/d = (a*d + b)/d stays reduced
            lau, frac = (self, other) if one_s else (other, self)
            return _raw(_ladd(_lmul(lau._num, frac._den), frac._num), frac._den)
        if self._den == other._den:
            return _normalize(_ladd(self._num, other._num), self._den)
        # common denominator b*d' = lcm(b, d), where b/d = n'/d' in lowest terms
        ratio = _normalize(dict(self._den), other._den)
        num = _ladd(_lmul(self._num, ratio._den), _lmul(other._num, ratio._num))
        return _normalize(num, _lmul(self._den, ratio._den))

    __radd__ = __add__

    def __neg__(self):
        return _raw({e: -c for e, c in self._num.items()}, self._den)

    def __sub__(self, other):
        if not isinstance(other, ExpConstant):
            try:
                other = ExpConstant(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ExpConstant):
            try:
                other = ExpConstant(other)
            except TypeError:
                return NotImplemented
        if not self._num or not other._num:
            return _raw({}, _ONE_DEN)
        one_s, one_o = _is_one(self._den), _is_one(other._den)
        if one_s and one_o:
            return _raw(_lmul(self._num, other._num), _ONE_DEN)
        if one_s or one_o:
            # only the Laurent factor can share a divisor with the denominator
            lau, frac = (self, other) if one_s else (other, self)
            part = _normalize(dict(lau._num), frac._den)
            return _raw(_lmul(part._num, frac._num), part._den)
        return _normalize(_lmul(self._num, other._num), _lmul(self._den, other._den))

    __rmul__ = __mul__

    def inverse(self):
        if not self._num:
            raise DivisionByZero("division by zero in K")
        return _normalize(dict(self._den), self._num, coprime=True)

    def __truediv__(self, other):
        if not isinstance(other, ExpConstant):
            try:
                other = ExpConstant(other)
            except TypeError:
                return NotImplemented
        if not other._num:
            raise DivisionByZero("division by zero in K")
        if other.is_monomial() and _is_one(self._den):
            (s, d), = other._num.items()
            return _raw({e - s: c / d for e, c in self._num.items()}, _ONE_DEN)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ExpConstant.coerce(other) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = ExpConstant(1)
        for _ in range(n):
            out = out * self
        return out

    # -- comparison / hashing -------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, ExpConstant):
            try:
                other = ExpConstant(other)
            except TypeError:
                return NotImplemented
        return self._num == other._num and (
            self._den == other._den or (_is_one(self._den) and _is_one(other._den))
        )

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.to_fraction())
            else:
                den = () if _is_one(self._den) else tuple(sorted(self._den.items()))
                self._hash = hash((tuple(sorted(self._num.items())), den))
        return self._hash

    # -- display -------------------------------------------------------

    def __float__(self):
        """Decimal approximation; for display only."""
        n = sum(float(c) * _fexp(float(e)) for e, c in self._num.items())
        d = sum(float(c) * _fexp(float(e)) for e, c in self._den.items())
        return n / d

    def __str__(self):
        num = _fmt_laurent(self._num)
        if _is_one(self._den):
            return num
        if len(self._num) > 1:
            num = f"({num})"
        return f"{num}/({_fmt_laurent(self._den)})"

    def __repr__(self):
        return f"ExpConstant({str(self)!r})"


ZERO = ExpConstant(0)
ONE = ExpConstant(1)
E = ExpConstant.exp(1)
