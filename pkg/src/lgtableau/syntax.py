"""Formulas of the Lambek-Grishin calculus and their ASCII syntax.

Connectives and their tokens::

    *   fusion            A * B
    /   right implication A / B
    \\   left implication  B \\ A
    +   fission           A + B
    o/  right subtraction A o/ B
    o\\  left subtraction  B o\\ A

A composite argument of a connective must be parenthesised; there is no
precedence and no associativity.
"""
from __future__ import annotations

import enum
import re
from typing import Iterable, NamedTuple, Union

__all__ = [
    "Atom", "Binary", "Formula", "Sign", "SignedFormula", "FormulaSyntaxError",
    "CONNECTIVES", "parse_formula", "print_formula", "parse_signed",
    "print_signed", "degree", "subformulas", "subformula_closure", "atoms",
]

FUSION, RIGHT_IMPL, LEFT_IMPL = "*", "/", "\\"
FISSION, RIGHT_SUB, LEFT_SUB = "+", "o/", "o\\"
CONNECTIVES = (FUSION, RIGHT_IMPL, LEFT_IMPL, FISSION, RIGHT_SUB, LEFT_SUB)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class Atom:
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        if not _ATOM_RE.fullmatch(name):
            raise ValueError(f"bad atom name {name!r}")
        self.name = name
        self._hash = hash(("atom", name))

    def __eq__(self, other):
        return self is other or (isinstance(other, Atom) and other.name == self.name)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Atom({self.name!r})"

    def __str__(self):
        return self.name

    @property
    def degree(self) -> int:
        return 0

    @property
    def key(self) -> str:
        return self.name


class Binary:
    """A connective applied to two formulas.

    ``left`` and ``right`` follow the written order, so ``B \\ A`` has
    ``left=B`` and ``right=A``.
    """

    __slots__ = ("op", "left", "right", "_hash", "_key", "degree")

    def __init__(self, op: str, left: "Formula", right: "Formula"):
        if op not in CONNECTIVES:
            raise ValueError(f"unknown connective {op!r}")
        self.op = op
        self.left = left
        self.right = right
        self.degree = 1 + left.degree + right.degree
        self._hash = hash((op, left, right))
        self._key = None

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, Binary) and self._hash == other._hash
                and self.op == other.op and self.left == other.left
                and self.right == other.right)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Binary({self.op!r}, {self.left!r}, {self.right!r})"

    def __str__(self):
        return print_formula(self)

    @property
    def key(self) -> str:
        if self._key is None:
            self._key = print_formula(self)
        return self._key


Formula = Union[Atom, Binary]


class Sign(enum.Enum):
    IN = "i"    # input, asserted true at its label
    OUT = "o"   # output, asserted false at its label

    def flip(self) -> "Sign":
        return Sign.OUT if self is Sign.IN else Sign.IN

    def __repr__(self):
        return f"Sign.{self.name}"


class SignedFormula(NamedTuple):
    formula: Formula
    sign: Sign

    def flip(self) -> "SignedFormula":
        return SignedFormula(self.formula, self.sign.flip())

    def __str__(self):
        return print_signed(self)


def degree(f: Formula) -> int:
    return f.degree


def subformulas(f: Formula) -> Iterable[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Binary):
            stack.append(g.left)
            stack.append(g.right)


def subformula_closure(fs: Iterable[Formula]) -> frozenset:
    return frozenset(g for f in fs for g in subformulas(f))


def atoms(f: Formula) -> frozenset:
    return frozenset(g for g in subformulas(f) if isinstance(g, Atom))


# ---------------------------------------------------------------- printing

def print_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    return f"{_arg(f.left)} {f.op} {_arg(f.right)}"


def _arg(f: Formula) -> str:
    return f.name if isinstance(f, Atom) else f"({print_formula(f)})"


def print_signed(sf: SignedFormula) -> str:
    return f"{_arg(sf.formula)}^{sf.sign.value}"


# ----------------------------------------------------------------- parsing

_ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*")
_TOKEN_RE = re.compile(r"\s*(?:(o/|o\\|[*/\\+()])|([a-z][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(3) is not None:
            raise FormulaSyntaxError(f"unexpected character {m.group(3)!r}", text, m.start(3))
        if m.group(1) is not None:
            tokens.append((m.group(1), m.start(1)))
        else:
            tokens.append(("ATOM:" + m.group(2), m.start(2)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, len(self.text))

    def error(self, msg):
        raise FormulaSyntaxError(msg, self.text, self.peek()[1])

    def formula(self) -> Formula:
        left = self.operand()
        tok, _ = self.peek()
        if tok in CONNECTIVES:
            self.i += 1
            right = self.operand()
            nxt, _ = self.peek()
            if nxt in CONNECTIVES:
                self.error("ambiguous nesting, parenthesise the argument")
            return Binary(tok, left, right)
        return left

    def operand(self) -> Formula:
        tok, _ = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        if tok.startswith("ATOM:"):
            self.i += 1
            return Atom(tok[5:])
        if tok == "(":
            self.i += 1
            f = self.formula()
            if self.peek()[0] != ")":
                self.error("expected ')'")
            self.i += 1
            return f
        self.error(f"unexpected token {tok!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] is not None:
        p.error("trailing input")
    return f


def parse_signed(text: str) -> SignedFormula:
    body, sep, sign = text.strip().rpartition("^")
    if not sep or sign not in ("i", "o"):
        raise FormulaSyntaxError("signed formula must end in ^i or ^o", text, len(text))
    return SignedFormula(parse_formula(body), Sign(sign))
