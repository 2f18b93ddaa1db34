"""Closed-form integer sequences in the index variable ``n``.

Grammar (docs/grammar.md)::

    expr    := term (("+" | "-") term)*
    term    := power (("*" | "/") power)*
    power   := postfix ("^" power)?          right-associative
    postfix := primary "!"*
    primary := INT | "n" | "(" expr ")"
             | "tower" "(" expr "," expr "," expr ")"
             | "nthprime" "(" expr ")"

``tower(base, height, top)`` is the iterated power f₁ = top, f_{k+1} = base^{f_k},
evaluated to f_height. Division is exact-only. Values are Python ints; anything that
would exceed the bit budget raises :class:`BitBudgetExceeded` before it is computed,
so callers can fall back to :mod:`irrat.magnitude`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import TypeAlias

from irrat.config import DEFAULT_BIT_BUDGET, Config
from irrat.errors import (
    BitBudgetExceeded,
    InexactDivision,
    NonPositiveValue,
    ParseError,
)
from irrat.primes import PrimeTable, shared_table

logger = logging.getLogger(__name__)

__all__ = [
    "BinOp",
    "Evaluator",
    "Factorial",
    "Node",
    "NthPrime",
    "Num",
    "Op",
    "SequenceExpr",
    "Tower",
    "Var",
    "eval_sequence",
    "format_expr",
    "parse_sequence_expr",
]


class Op(Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"
    POW = "^"


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class BinOp:
    op: Op
    left: Node
    right: Node


@dataclass(frozen=True)
class Factorial:
    operand: Node


@dataclass(frozen=True)
class NthPrime:
    index: Node


@dataclass(frozen=True)
class Tower:
    base: Node
    height: Node
    top: Node


Node: TypeAlias = Num | Var | BinOp | Factorial | NthPrime | Tower

N = Var()


@dataclass(frozen=True)
class SequenceExpr:
    """A parsed sequence; equality is structural on the AST."""

    root: Node

    def __str__(self) -> str:
        return format_expr(self)


# --- tokenizer ---


@dataclass(frozen=True)
class _Token:
    kind: str  # "int", "ident", "op", "(", ")", ",", "end"
    text: str
    position: int


# matches the interpreter's default int/str conversion limit
_MAX_LITERAL_DIGITS = 4300

_SINGLE = {"(": "(", ")": ")", ",": ","}
_OPERATORS = "+-*/^!"


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c.isdigit():
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            tokens.append(_Token("int", text[start:i], start))
        elif c.isalpha() or c == "_":
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(_Token("ident", text[start:i], start))
        elif c in _OPERATORS:
            tokens.append(_Token("op", c, i))
            i += 1
        elif c in _SINGLE:
            tokens.append(_Token(_SINGLE[c], c, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {c!r}", position=i, text=text)
    tokens.append(_Token("end", "", len(text)))
    return tokens


# --- parser ---


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def _advance(self) -> _Token:
        token = self.tokens[self.pos]
        if token.kind != "end":
            self.pos += 1
        return token

    def _error(self, message: str, token: _Token | None = None) -> ParseError:
        token = token or self.current
        if token.kind == "end":
            message = f"{message}, found end of input"
        else:
            message = f"{message}, found {token.text!r}"
        return ParseError(message, position=token.position, text=self.text)

    def _expect(self, kind: str) -> _Token:
        if self.current.kind != kind:
            raise self._error(f"expected {kind!r}")
        return self._advance()

    def _at_op(self, *ops: str) -> bool:
        return self.current.kind == "op" and self.current.text in ops

    def parse(self) -> SequenceExpr:
        if self.current.kind == "end":
            raise ParseError("empty expression", position=0, text=self.text)
        root = self.expr()
        if self.current.kind != "end":
            raise self._error("unexpected trailing input")
        return SequenceExpr(root)

    def expr(self) -> Node:
        node = self.term()
        while self._at_op("+", "-"):
            op = Op(self._advance().text)
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.power()
        while self._at_op("*", "/"):
            op = Op(self._advance().text)
            node = BinOp(op, node, self.power())
        return node

    def power(self) -> Node:
        base = self.postfix()
        if self._at_op("^"):
            self._advance()
            return BinOp(Op.POW, base, self.power())
        return base

    def postfix(self) -> Node:
        node = self.primary()
        while self._at_op("!"):
            self._advance()
            node = Factorial(node)
        return node

    def primary(self) -> Node:
        token = self.current
        if token.kind == "int":
            if len(token.text) > _MAX_LITERAL_DIGITS:
                raise ParseError(
                    f"integer literal of {len(token.text)} digits exceeds "
                    f"{_MAX_LITERAL_DIGITS} digits",
                    position=token.position,
                    text=self.text,
                )
            self._advance()
            return Num(int(token.text))
        if token.kind == "(":
            self._advance()
            node = self.expr()
            self._expect(")")
            return node
        if token.kind == "ident":
            if token.text == "n":
                self._advance()
                return N
            if token.text == "tower":
                self._advance()
                self._expect("(")
                base = self.expr()
                self._expect(",")
                height = self.expr()
                self._expect(",")
                top = self.expr()
                self._expect(")")
                return Tower(base, height, top)
            if token.text == "nthprime":
                self._advance()
                self._expect("(")
                index = self.expr()
                self._expect(")")
                return NthPrime(index)
            raise ParseError(
                f"unknown identifier {token.text!r}", position=token.position, text=self.text
            )
        raise self._error("expected a number, 'n', '(' or a function")


def parse_sequence_expr(text: str) -> SequenceExpr:
    """Parse ``text`` into a :class:`SequenceExpr`."""
    return _Parser(text).parse()


# --- formatter ---

_PRECEDENCE = {Op.ADD: 1, Op.SUB: 1, Op.MUL: 2, Op.DIV: 2, Op.POW: 3}
_ATOMIC = 5


def _precedence(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PRECEDENCE[node.op]
    if isinstance(node, Factorial):
        return 4
    return _ATOMIC


def _wrap(node: Node, parens: bool) -> str:
    text = _format(node)
    return f"({text})" if parens else text


def _format(node: Node) -> str:
    match node:
        case Num(value):
            return str(value)
        case Var():
            return "n"
        case Factorial(operand):
            return _wrap(operand, _precedence(operand) != _ATOMIC) + "!"
        case NthPrime(index):
            return f"nthprime({_format(index)})"
        case Tower(base, height, top):
            return f"tower({_format(base)}, {_format(height)}, {_format(top)})"
        case BinOp(Op.POW, left, right):
            left_text = _wrap(left, _precedence(left) != _ATOMIC)
            return f"{left_text}^{_wrap(right, _precedence(right) != _ATOMIC)}"
        case BinOp(op, left, right):
            prec = _PRECEDENCE[op]
            left_text = _wrap(left, _precedence(left) < prec)
            return f"{left_text}{op.value}{_wrap(right, _precedence(right) <= prec)}"
    raise TypeError(f"not a sequence node: {node!r}")


def format_expr(expr: SequenceExpr | Node) -> str:
    """Canonical text: no spaces around operators, ``", "`` between function arguments."""
    return _format(expr.root if isinstance(expr, SequenceExpr) else expr)


# --- evaluation ---


def factorial_bits(k: int) -> float:
    """log₂(k!) estimate used for budget checks."""
    return math.lgamma(k + 1) / math.log(2)


class Evaluator:
    """Exact evaluation under a bit budget and a prime-index ceiling."""

    def __init__(
        self,
        bit_budget: int = DEFAULT_BIT_BUDGET,
        primes: PrimeTable | None = None,
    ) -> None:
        self.bit_budget = bit_budget
        self.primes = primes if primes is not None else shared_table()

    @classmethod
    def from_config(cls, config: Config) -> Evaluator:
        return cls(
            bit_budget=config.evaluation.bit_budget,
            primes=shared_table(config.evaluation.prime_index_ceiling),
        )

    def __call__(self, expr: SequenceExpr | Node, n: int) -> int:
        if n < 0:
            raise ValueError(f"index must be >= 0, got {n}")
        root = expr.root if isinstance(expr, SequenceExpr) else expr
        value = self.node(root, n)
        if value <= 0:
            raise NonPositiveValue(f"{format_expr(root)} is {value} at n={n}", value=value)
        return value

    def _check(self, value: int) -> int:
        if value.bit_length() > self.bit_budget:
            raise BitBudgetExceeded(bits=value.bit_length(), budget=self.bit_budget)
        return value

    def node(self, node: Node, n: int) -> int:
        """Value of a single node; the bare index may be 0, every operator result is >= 1."""
        match node:
            case Var():
                return n
            case Num(value):
                if value <= 0:
                    raise NonPositiveValue("literal 0 is not a positive value", value=value)
                return self._check(value)
            case BinOp(op, left, right):
                return self._positive(node, self.binop(op, self.node(left, n),
                                                        self.node(right, n)), n)
            case Factorial(operand):
                return self.factorial(self.node(operand, n))
            case NthPrime(index):
                k = self.node(index, n)
                if k <= 0:
                    raise NonPositiveValue(f"nthprime index {k} at n={n}", value=k)
                return self.primes.nth(k)
            case Tower(base, height, top):
                h = self.node(height, n)
                if h < 1:
                    raise NonPositiveValue(f"tower height {h} at n={n}", value=h)
                return self.tower(self.node(base, n), h, self.node(top, n))
        raise TypeError(f"not a sequence node: {node!r}")

    def _positive(self, node: Node, value: int, n: int) -> int:
        if value <= 0:
            raise NonPositiveValue(f"{format_expr(node)} is {value} at n={n}", value=value)
        return value

    def binop(self, op: Op, a: int, b: int) -> int:
        if op is Op.ADD:
            return self._check(a + b)
        if op is Op.SUB:
            return a - b
        if op is Op.MUL:
            bits = a.bit_length() + b.bit_length() - 1
            if a and b and bits > self.bit_budget:
                raise BitBudgetExceeded(bits=bits, budget=self.bit_budget)
            return a * b
        if op is Op.DIV:
            if b == 0:
                raise NonPositiveValue("division by zero", value=0)
            quotient, remainder = divmod(a, b)
            if remainder:
                raise InexactDivision(a, b)
            return quotient
        return self.power(a, b)

    def power(self, base: int, exponent: int) -> int:
        if base == 0:
            raise NonPositiveValue("power of zero", value=0)
        if base == 1 or exponent == 0:
            return 1
        if exponent.bit_length() > 64:
            raise BitBudgetExceeded(bits=exponent, budget=self.bit_budget)
        bits = math.floor(exponent * math.log2(base)) + 1
        if bits > self.bit_budget:
            raise BitBudgetExceeded(bits=bits, budget=self.bit_budget)
        return self._check(base**exponent)

    def factorial(self, k: int) -> int:
        if k.bit_length() > 64:
            raise BitBudgetExceeded(bits=k, budget=self.bit_budget)
        if k > 1:
            bits = math.ceil(factorial_bits(k))
            if bits > self.bit_budget:
                raise BitBudgetExceeded(bits=bits, budget=self.bit_budget)
        return self._check(math.factorial(k))

    def tower(self, base: int, height: int, top: int) -> int:
        if height == 1:
            return top
        if base == 1:
            return 1
        value = top
        for _ in range(height - 1):
            value = self.power(base, value)
        return value


def eval_sequence(expr: SequenceExpr, n: int, evaluator: Evaluator | None = None) -> int:
    """Exact value of ``expr`` at index ``n`` (default budget 2^21 bits)."""
    return (evaluator or Evaluator())(expr, n)
