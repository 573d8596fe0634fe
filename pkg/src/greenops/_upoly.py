"""Dense univariate polynomials over an exact field.

A polynomial is a list of coefficients, lowest degree first, with no trailing
zeros (the zero polynomial is ``[]``).  Coefficients only need ``+ - * /`` and
truthiness, so the same helpers serve :class:`fractions.Fraction` and
:class:`greenops.constants.ExpConstant`.
"""

from fractions import Fraction

from flint import fmpq, fmpq_poly
from gmpy2 import mpq, mpz

_MPQ = type(mpq(0))
_MPZ = type(mpz(0))


def strip(p):
    while p and not p[-1]:
        p.pop()
    return p


def sub(p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        if i < len(p) and i < len(q):
            out.append(p[i] - q[i])
        elif i < len(p):
            out.append(p[i])
        else:
            out.append(-q[i])
    return strip(out)


def mul(p, q):
    if not p or not q:
        return []
    out = [p[0] - p[0]] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return strip(out)


def divmod_(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    if len(r) < len(q):
        return [], r
    lead = q[-1]
    quot = [None] * (len(r) - len(q) + 1)
    for k in range(len(r) - len(q), -1, -1):
        c = r[k + len(q) - 1] / lead
        quot[k] = c
        if c:
            for j, b in enumerate(q):
                r[k + j] = r[k + j] - c * b
    zero = lead - lead
    quot = [zero if c is None else c for c in quot]
    return strip(quot), strip(r[: len(q) - 1])


def exact_div(p, q):
    """Return ``p / q`` if ``q`` divides ``p`` exactly, else ``None``."""
    quot, rem = divmod_(p, q)
    return None if rem else quot


def monic(p):
    lead = p[-1]
    return [c / lead for c in p]


def _to_flint(p):
    return fmpq_poly([fmpq(int(c.numerator), int(c.denominator)) for c in p])


def _from_flint(f):
    return [mpq(int(c.p), int(c.q)) for c in f.coeffs()]


def _is_rational(p):
    return all(isinstance(c, (int, Fraction, _MPQ, _MPZ)) for c in p)


def mul_rational(p, q):
    """Product of polynomials with rational coefficients."""
    return _from_flint(_to_flint(p) * _to_flint(q))


def cancel(p, q):
    """Divide rational polynomials ``p`` and ``q`` by their monic gcd."""
    fp, fq = _to_flint(p), _to_flint(q)
    g = fp.gcd(fq)
    if g.degree() < 1:
        return p, q
    return _from_flint(fp // g), _from_flint(fq // g)


def gcd(p, q):
    """Monic gcd; ``gcd([], [])`` is ``[]``."""
    if not p or not q:
        r = p or q
        return monic(r) if r else []
    if _is_rational(p) and _is_rational(q):
        return _from_flint(_to_flint(p).gcd(_to_flint(q)))
    while q:
        p, q = q, divmod_(p, q)[1]
    return monic(p) if p else []
