"""Tokenizer, parser and unparser for the operator expression language.

Grammar, loosest binding first::

    sum     := dot (('+' | '-') dot)*
    dot     := product ('.' product)*
    product := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' INT)?
    primary := INT | 'x' | 'd' | 'D' | 'a' | 'A'
             | 'e' '(' sum ')' | 'E' '[' sum ']' | 'exp' '(' sum ')'
             | NAME '(' [sum (',' sum)*] ')' | '(' sum ')'

``NAME`` is one of the constructors ``BP``, ``GBP``, ``BC``, ``ES`` and ``FS``.
"""

import re
from dataclasses import dataclass

from .errors import ParseError

CONSTRUCTORS = ("BP", "GBP", "BC", "ES", "FS")

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^.(),\[\]])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text):
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        chunk = m.group()
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, chunk, line, col))
        for ch in chunk:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    tokens.append(Token("end", "", line, col))
    return tokens


# -- AST -----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Deriv:
    pass


@dataclass(frozen=True)
class Integral:
    pass


@dataclass(frozen=True)
class Eval:
    point: object


@dataclass(frozen=True)
class Exp:
    arg: object


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


_NAMED = {"x": Var, "d": Deriv, "D": Deriv, "a": Integral, "A": Integral}


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def fail(self, msg, tok=None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.column)

    def accept(self, text):
        if self.tok.kind in ("op", "name") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.fail(f"expected {text!r}, found {found!r}")

    def parse(self):
        node = self.sum()
        if self.tok.kind != "end":
            self.fail(f"unexpected {self.tok.text!r}")
        return node

    def sum(self):
        node = self.dot()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.dot())
        return node

    def dot(self):
        node = self.product()
        while self.accept("."):
            node = BinOp(".", node, self.product())
        return node

    def product(self):
        node = self.unary()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.primary()
        if self.accept("^"):
            tok = self.tok
            if self.accept("("):
                tok = self.tok
                if tok.kind != "num":
                    self.fail("exponent must be a nonnegative integer", tok)
                self.i += 1
                self.expect(")")
            elif tok.kind == "num":
                self.i += 1
            else:
                self.fail("exponent must be a nonnegative integer", tok)
            node = BinOp("^", node, Num(int(tok.text)))
            if self.tok.text == "^":
                self.fail("chained exponents need parentheses")
        return node

    def primary(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Num(int(tok.text))
        if self.accept("("):
            node = self.sum()
            self.expect(")")
            return node
        if tok.kind != "name":
            self.fail(f"unexpected {tok.text or 'end of input'!r}")
        self.i += 1
        if tok.text in _NAMED:
            return _NAMED[tok.text]()
        if tok.text == "e":
            self.expect("(")
            node = Eval(self.sum())
            self.expect(")")
            return node
        if tok.text == "E":
            self.expect("[")
            node = Eval(self.sum())
            self.expect("]")
            return node
        if tok.text == "exp":
            self.expect("(")
            node = Exp(self.sum())
            self.expect(")")
            return node
        if tok.text in CONSTRUCTORS:
            self.expect("(")
            args = []
            if not self.accept(")"):
                args.append(self.sum())
                while self.accept(","):
                    args.append(self.sum())
                self.expect(")")
            return Call(tok.text, tuple(args))
        self.fail(f"unknown name {tok.text!r}", tok)


def parse(text):
    """Parse an expression into its AST."""
    return _Parser(text).parse()


# -- unparsing -----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, ".": 2, "*": 3, "/": 3, "neg": 4, "^": 5}


def _prec(node):
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC["neg"]
    return 6


def unparse(node):
    """Render an AST so that ``parse(unparse(node)) == node``."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Deriv):
        return "D"
    if isinstance(node, Integral):
        return "A"
    if isinstance(node, Eval):
        return f"E[{unparse(node.point)}]"
    if isinstance(node, Exp):
        return f"exp({unparse(node.arg)})"
    if isinstance(node, Call):
        return f"{node.name}(" + ", ".join(unparse(a) for a in node.args) + ")"
    if isinstance(node, Neg):
        inner = unparse(node.operand)
        return "-" + (f"({inner})" if _prec(node.operand) < _PREC["neg"] else inner)
    p = _PREC[node.op]
    left = unparse(node.left)
    if _prec(node.left) < p or (node.op == "^" and _prec(node.left) <= p):
        left = f"({left})"
    right = unparse(node.right)
    # all binary operators are left-associative
    if _prec(node.right) <= p:
        right = f"({right})"
    return f"{left} {node.op} {right}" if node.op in "+-" else f"{left}{node.op}{right}"
