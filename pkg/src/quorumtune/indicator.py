"""A tiny arithmetic expression language for performance indicators.

Applications declare how their scalar performance indicator ``chi`` is
computed from the consistency level ``phi`` (and named constants) as a small
expression, parsed once and evaluated many times by the controller::

    program = parse("A*phi^3 + B*phi^2 + C*phi + D")
    chi = evaluate(program, {"A": 1, "B": 1, "C": 0, "D": 0, "phi": 0.5})

Grammar (EBNF)::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := unary ("^" factor)?
    unary  := "-" unary | atom
    atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"

``+ - * /`` are left-associative and ``^`` is right-associative.  Unary
minus binds tighter than ``^`` in this grammar — ``factor`` raises a fully
parsed ``unary`` — so ``-2^2 == (-2)^2 == 4`` while ``2^-3`` is still legal.
The only functions are ``log10`` and ``abs``; unknown function names are
rejected at parse time.  Identifiers are ASCII letters/digits/underscores
starting with a letter; whitespace is insignificant.

The AST is a tree of frozen dataclasses with structural equality, and
:func:`unparse` emits a fully parenthesized form that re-parses to a
structurally identical tree.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Union

from .errors import EvaluationError, ParseError

__all__ = [
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "Expr",
    "IndicatorProgram",
    "Bindings",
    "FUNCTIONS",
    "parse",
    "evaluate",
    "unparse",
    "free_variables",
]


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of "+", "-", "*", "/", "^"
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str  # one of FUNCTIONS
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Call]

Bindings = Mapping[str, float]

FUNCTIONS = ("log10", "abs")


@dataclass(frozen=True)
class IndicatorProgram:
    """A parsed indicator expression: the original source plus its AST."""

    source: str
    ast: Expr

    def evaluate(self, bindings: Bindings) -> float:
        return evaluate(self, bindings)

    @property
    def free_variables(self) -> frozenset[str]:
        return free_variables(self.ast)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        if match is None:
            raise ParseError(f"unexpected character {source[pos]!r}", pos)
        kind = match.lastgroup
        if kind != "ws":
            tokens.append((kind, match.group(), pos))
        pos = match.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    """Recursive-descent parser over the token list."""

    def __init__(self, tokens: list[tuple[str, str, int]]):
        self._tokens = tokens
        self._index = 0

    def _peek(self) -> tuple[str, str, int]:
        return self._tokens[self._index]

    def _advance(self) -> tuple[str, str, int]:
        token = self._tokens[self._index]
        self._index += 1
        return token

    def _unexpected(self) -> ParseError:
        kind, text, pos = self._peek()
        if kind == "end":
            return ParseError("unexpected end of input", pos)
        return ParseError(f"unexpected {text!r}", pos)

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self._peek()[:2] in (("op", "+"), ("op", "-")):
            op = self._advance()[1]
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> Expr:
        node = self.parse_factor()
        while self._peek()[:2] in (("op", "*"), ("op", "/")):
            op = self._advance()[1]
            node = BinOp(op, node, self.parse_factor())
        return node

    def parse_factor(self) -> Expr:
        node = self.parse_unary()
        if self._peek()[:2] == ("op", "^"):
            self._advance()
            # Right recursion makes ^ right-associative: 2^3^2 == 2^(3^2).
            node = BinOp("^", node, self.parse_factor())
        return node

    def parse_unary(self) -> Expr:
        if self._peek()[:2] == ("op", "-"):
            self._advance()
            return Neg(self.parse_unary())
        return self.parse_atom()

    def parse_atom(self) -> Expr:
        kind, text, pos = self._peek()
        if kind == "number":
            self._advance()
            return Num(float(text))
        if kind == "ident":
            self._advance()
            if self._peek()[:2] == ("op", "("):
                if text not in FUNCTIONS:
                    raise ParseError(f"unknown function {text!r}", pos)
                self._advance()
                arg = self.parse_expr()
                self._expect_close_paren()
                return Call(text, arg)
            return Var(text)
        if (kind, text) == ("op", "("):
            self._advance()
            node = self.parse_expr()
            self._expect_close_paren()
            return node
        raise self._unexpected()

    def _expect_close_paren(self) -> None:
        if self._peek()[:2] != ("op", ")"):
            raise self._unexpected()
        self._advance()

    def parse_program(self) -> Expr:
        node = self.parse_expr()
        if self._peek()[0] != "end":
            raise self._unexpected()
        return node


def parse(source: str) -> IndicatorProgram:
    """Parse indicator source text into an :class:`IndicatorProgram`.

    Raises:
        ParseError: on malformed input or an unknown function name; the
            error carries the 0-based character offset of the problem.
    """
    if not isinstance(source, str):
        raise ParseError(f"expected source text, got {type(source).__name__}", 0)
    tokens = _tokenize(source)
    if tokens[0][0] == "end":
        raise ParseError("empty expression", 0)
    return IndicatorProgram(source=source, ast=_Parser(tokens).parse_program())


def _eval(node: Expr, bindings: Bindings) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.name not in bindings:
            raise EvaluationError(f"unbound variable {node.name!r}")
        value = float(bindings[node.name])
        if not math.isfinite(value):
            raise EvaluationError(f"variable {node.name!r} is bound to non-finite {value!r}")
        return value
    if isinstance(node, Neg):
        return -_eval(node.operand, bindings)
    if isinstance(node, Call):
        value = _eval(node.arg, bindings)
        if node.func == "log10":
            if value <= 0.0:
                raise EvaluationError(
                    f"domain error in {unparse(node)!r}: log10 argument {value!r} is not positive"
                )
            return math.log10(value)
        return abs(value)
    left = _eval(node.left, bindings)
    right = _eval(node.right, bindings)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        if right == 0.0:
            raise EvaluationError(f"division by zero in {unparse(node)!r}")
        return left / right
    try:
        return math.pow(left, right)
    except (ValueError, OverflowError) as exc:
        raise EvaluationError(f"domain error in {unparse(node)!r}: {exc}") from None


def evaluate(program: IndicatorProgram | Expr, bindings: Bindings) -> float:
    """Evaluate a program (or bare AST) under the given variable bindings.

    Raises:
        EvaluationError: for an unbound variable, a non-finite binding, or a
            numeric domain error (``log10`` of a non-positive value, division
            by zero, fractional power of a negative base); the message names
            the offending node.
    """
    ast = program.ast if isinstance(program, IndicatorProgram) else program
    return _eval(ast, bindings)


def unparse(node: Expr | IndicatorProgram) -> str:
    """Serialize an AST to a fully parenthesized source string.

    For any AST the parser can produce, ``parse(unparse(ast)).ast`` is
    structurally equal to ``ast``.  (A hand-built ``Num`` with a negative
    value serializes as a negation and therefore reparses as ``Neg``; the
    parser itself never produces negative literals.)
    """
    if isinstance(node, IndicatorProgram):
        node = node.ast
    if isinstance(node, Num):
        value = node.value
        if value < 0.0 or math.copysign(1.0, value) < 0.0:
            return f"(-{-value!r})"
        return repr(value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{unparse(node.operand)})"
    if isinstance(node, BinOp):
        return f"({unparse(node.left)} {node.op} {unparse(node.right)})"
    return f"{node.func}({unparse(node.arg)})"


def free_variables(node: Expr | IndicatorProgram) -> frozenset[str]:
    """All variable names the expression reads."""
    if isinstance(node, IndicatorProgram):
        node = node.ast
    if isinstance(node, Var):
        return frozenset((node.name,))
    if isinstance(node, Neg):
        return free_variables(node.operand)
    if isinstance(node, BinOp):
        return free_variables(node.left) | free_variables(node.right)
    if isinstance(node, Call):
        return free_variables(node.arg)
    return frozenset()
