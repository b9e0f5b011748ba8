"""Text syntax for B-valued polynomials: recursive-descent parser and printer.

Grammar (``*`` is required, juxtaposition is a syntax error)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' uint] ["'"]
    atom   := 'X' | 't' | name | number | '(' expr ')'

``number`` is a real literal with an optional ``j`` suffix for imaginary
literals.  Names resolve against a coefficient table; ``e<k>`` names the
k-th orthonormal basis element of B.
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .coeff_algebra import CoeffAlgebra
from .errors import CapExceededError, NCPError
from .ncpoly import Monomial, NCPoly
from .tensor2 import TensorElem

MAX_TEXT_LENGTH = 1_000_000
MAX_EXPONENT = 64


class ParseError(NCPError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class UnknownNameError(ParseError):
    pass


class PowerTooLargeError(ParseError):
    pass


# -- AST -----------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: complex
    pos: int = 0


@dataclass(frozen=True)
class Indeterminate:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class Name:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class Neg:
    operand: ExprAST
    pos: int = 0


@dataclass(frozen=True)
class BinOp:
    op: str
    left: ExprAST
    right: ExprAST
    pos: int = 0


@dataclass(frozen=True)
class Pow:
    base: ExprAST
    exponent: int
    pos: int = 0


@dataclass(frozen=True)
class Adjoint:
    operand: ExprAST
    pos: int = 0


ExprAST = Union[Num, Indeterminate, Name, Neg, BinOp, Pow, Adjoint]


# -- tokenizer -----------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?j?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^'()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, text: str) -> Token | None:
        if self.tok.kind == "op" and self.tok.text == text:
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        tok = self.accept(text)
        if tok is None:
            raise ParseError(f"expected {text!r}, found {self._describe(self.tok)}", self.tok.pos)
        return tok

    @staticmethod
    def _describe(tok: Token) -> str:
        return "end of input" if tok.kind == "end" else repr(tok.text)

    def parse(self) -> ExprAST:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(
                f"unexpected {self._describe(self.tok)} (multiplication needs '*')", self.tok.pos
            )
        return node

    def expr(self) -> ExprAST:
        start = self.tok
        if self.accept("-"):
            node: ExprAST = Neg(self.term(), start.pos)
        else:
            self.accept("+")
            node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance()
            node = BinOp(op.text, node, self.term(), op.pos)
        return node

    def term(self) -> ExprAST:
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text == "*":
            op = self.advance()
            node = BinOp("*", node, self.factor(), op.pos)
        return node

    def factor(self) -> ExprAST:
        node = self.atom()
        caret = self.accept("^")
        if caret is not None:
            tok = self.advance()
            if tok.kind != "number" or not tok.text.isdigit():
                raise ParseError("exponent must be a nonnegative integer", tok.pos)
            node = Pow(node, int(tok.text), caret.pos)
        prime = self.accept("'")
        if prime is not None:
            node = Adjoint(node, prime.pos)
        return node

    def atom(self) -> ExprAST:
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            if tok.text.endswith("j"):
                return Num(complex(0.0, float(tok.text[:-1])), tok.pos)
            return Num(complex(float(tok.text), 0.0), tok.pos)
        if tok.kind == "name":
            self.advance()
            if tok.text in ("X", "t"):
                return Indeterminate(tok.text, tok.pos)
            return Name(tok.text, tok.pos)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"expected an operand, found {self._describe(tok)}", tok.pos)


def parse_ast(text: str) -> ExprAST:
    if len(text) > MAX_TEXT_LENGTH:
        raise ParseError(f"expression longer than {MAX_TEXT_LENGTH} characters")
    return _Parser(text).parse()


# -- interpretation ------------------------------------------------------

_BASIS_NAME = re.compile(r"e(\d+)$")
_DEFAULT_NAME = re.compile(r"b(\d+)$")


def default_coefficient(algebra: CoeffAlgebra, k: int) -> np.ndarray:
    """Deterministic stand-in element of B for an undeclared name ``b<k>``."""
    from .models_rng import random_element

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=k, spawn_key=(0xB,))))
    return random_element(rng, algebra)


@dataclass
class ParseContext:
    """Name table for parsing.

    With ``strict`` unset, undeclared names ``b<k>`` resolve to fixed
    pseudo-random elements of B (see :func:`default_coefficient`).
    """

    algebra: CoeffAlgebra
    coefficients: Mapping[str, np.ndarray] = field(default_factory=dict)
    strict: bool = False
    _cache: dict[str, NCPoly] = field(default_factory=dict, init=False, repr=False)

    def resolve(self, name: str, pos: int) -> NCPoly:
        if name not in self._cache:
            self._cache[name] = self._lookup(name, pos)
        return self._cache[name]

    def _lookup(self, name: str, pos: int) -> NCPoly:
        if name in self.coefficients:
            return NCPoly.constant(self.algebra, self.coefficients[name], name)
        m = _BASIS_NAME.match(name)
        if m is not None and int(m.group(1)) < self.algebra.dim:
            return NCPoly.basis_word(self.algebra, (int(m.group(1)),))
        m = _DEFAULT_NAME.match(name)
        if m is not None and not self.strict:
            b = default_coefficient(self.algebra, int(m.group(1)))
            return NCPoly(self.algebra, [(1.0, Monomial([b], [name]))], check=False)
        raise UnknownNameError(f"unknown coefficient name {name!r}", pos)


def interpret(node: ExprAST, ctx: ParseContext) -> NCPoly:
    algebra = ctx.algebra
    if isinstance(node, Num):
        return NCPoly.one(algebra).scale(node.value)
    if isinstance(node, Indeterminate):
        return NCPoly.x(algebra)
    if isinstance(node, Name):
        return ctx.resolve(node.name, node.pos)
    if isinstance(node, Neg):
        return -interpret(node.operand, ctx)
    if isinstance(node, Adjoint):
        return interpret(node.operand, ctx).adjoint()
    if isinstance(node, Pow):
        base = interpret(node.base, ctx)
        k = node.exponent
        if k > MAX_EXPONENT or max(base.degree, 0) * k > NCPoly.max_degree:
            raise PowerTooLargeError(
                f"power {k} exceeds the degree cap {NCPoly.max_degree}", node.pos
            )
        return base**k
    if isinstance(node, BinOp) and node.op in "+-":
        return _interpret_sum(node, ctx)
    if isinstance(node, BinOp):
        left = interpret(node.left, ctx)
        right = interpret(node.right, ctx)
        try:
            return left * right
        except CapExceededError as exc:
            raise PowerTooLargeError(str(exc), node.pos) from exc
    raise TypeError(f"not an expression node: {node!r}")


def _interpret_sum(node: BinOp, ctx: ParseContext) -> NCPoly:
    # walk the left spine iteratively: long sums would exhaust the stack and
    # pairwise addition would be quadratic in the number of summands
    summands: list[tuple[float, ExprAST]] = []
    while isinstance(node, BinOp) and node.op in "+-":
        summands.append((1.0 if node.op == "+" else -1.0, node.right))
        node = node.left
    summands.append((1.0, node))
    terms = []
    for sign, sub in reversed(summands):
        terms += [(sign * w, m) for w, m in interpret(sub, ctx).terms]
    try:
        return NCPoly(ctx.algebra, terms, check=False)
    except CapExceededError as exc:
        raise PowerTooLargeError(str(exc), node.pos) from exc


def parse(text: str, ctx: ParseContext | CoeffAlgebra) -> NCPoly:
    if isinstance(ctx, CoeffAlgebra):
        ctx = ParseContext(ctx)
    return interpret(parse_ast(text), ctx)


# -- printing ------------------------------------------------------------


def _format_float(x: float) -> str:
    return repr(float(x))


def _signed_term(weight: complex, body: str) -> tuple[str, str]:
    """Split a weighted term into a sign and an unsigned, parseable text."""
    re_, im = weight.real, weight.imag
    if im == 0.0:
        sign = "-" if re_ < 0 else "+"
        mag = abs(re_)
        coef = "" if mag == 1.0 else _format_float(mag)
    elif re_ == 0.0:
        sign = "-" if im < 0 else "+"
        coef = f"{_format_float(abs(im))}j"
    else:
        sign = "+"
        op = "-" if im < 0 else "+"
        coef = f"({_format_float(re_)}{op}{_format_float(abs(im))}j)"
    if not coef:
        return sign, body
    if body == "1":
        return sign, coef
    return sign, f"{coef}*{body}"


def _join(pieces: list[tuple[str, str]]) -> str:
    if not pieces:
        return "0"
    sign, text = pieces[0]
    out = ("-" if sign == "-" else "") + text
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


def word_text(word: tuple[int, ...]) -> str:
    return "*X*".join(f"e{k}" for k in word)


def format_canonical(p: NCPoly) -> str:
    """Canonical word-basis text in degree-then-lexicographic order."""
    return _join([_signed_term(w, word_text(word)) for _, word, w in p.canonical().entries()])


def format_poly(p: NCPoly) -> str:
    """Stored-representation text when every coefficient is named, else canonical."""
    texts = [m.text() for _, m in p.terms]
    if any(t is None for t in texts):
        return format_canonical(p)
    return _join([_signed_term(w, t) for (w, _), t in zip(p.terms, texts)])


def format_tensor(u: TensorElem, tensor_sign: str = "⊗") -> str:
    sep = f" {tensor_sign} "
    pieces = []
    if all(l.text() is not None and r.text() is not None for _, l, r in u.terms):
        for w, l, r in u.terms:
            pieces.append(_signed_tensor(w, l.text() + sep + r.text()))
    else:
        for (a, _), idx, w in u.canonical().entries():
            left, right = idx[: a + 1], idx[a + 1 :]
            pieces.append(_signed_tensor(w, word_text(left) + sep + word_text(right)))
    return _join(pieces)


def _signed_tensor(weight: complex, body: str) -> tuple[str, str]:
    sign, text = _signed_term(weight, "\x00")
    if text == "\x00":
        return sign, body
    return sign, text.replace("\x00", f"({body})")
