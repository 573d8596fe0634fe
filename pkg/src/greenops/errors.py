"""Exception hierarchy.

Everything raised on purpose by the library derives from :class:`GreenOpsError`.
The CLI maps :class:`MathError` to exit code 1 and :class:`UsageError` to 2.
"""


class GreenOpsError(Exception):
    pass


class MathError(GreenOpsError):
    """A mathematical precondition failed (singular matrix, non-regular problem, ...)."""


class UsageError(GreenOpsError):
    """Malformed input: bad syntax, wrong types, wrong arity."""


class DivisionByZero(MathError, ZeroDivisionError):
    pass


class NoClosedForm(MathError):
    """An antiderivative (or monomial coordinates) would leave the coefficient algebra."""


class PoleAtPoint(MathError):
    pass


class SingularWronskian(MathError):
    pass


class ArityMismatch(MathError):
    pass


class Inconsistent(MathError):
    pass


class RankDeficient(MathError):
    pass


class MissingFundamentalSystem(MathError):
    pass


class NotRegular(MathError):
    pass


class NotSemiRegular(NotRegular):
    pass


class InvalidBasis(MathError):
    pass


class OrderMismatch(MathError):
    pass


class BadFactorization(MathError):
    pass


class SearchExhausted(MathError):
    pass


class ParseError(UsageError, SyntaxError):
    """Syntax error with a 1-based line/column position."""

    def __init__(self, message, line=1, column=1):
        text = f"{message} (line {line}, column {column})"
        super().__init__(text)
        self.msg = text
        self.lineno = self.line = line
        self.offset = self.column = column

    def __str__(self):
        return self.msg


class ExprTypeError(UsageError, TypeError):
    pass
