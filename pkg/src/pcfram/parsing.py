"""Tiny expression parser shared by the univariate and multivariate readers.

Expressions are parsed into nested tuples and then folded into whatever ring
the caller supplies through a :class:`Ring` adapter.  Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/')? unary)*        # juxtaposition is '*'
    unary  := ('+' | '-') unary | power
    power  := atom (('^' | '**') unary)?
    atom   := NUMBER | NAME | '(' expr ')'
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Callable, NamedTuple


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def tokenize(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        out.append(m.group(m.lastindex))
        pos = m.end()
    return out


class Ring(NamedTuple):
    const: Callable[[Fraction], Any]
    var: Callable[[str], Any]
    add: Callable[[Any, Any], Any]
    sub: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    div: Callable[[Any, Any], Any]
    pow: Callable[[Any, int], Any]
    neg: Callable[[Any], Any]


class _Parser:
    def __init__(self, tokens: list[str]):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}")
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while True:
            tok = self.peek()
            if tok in ("*", "/"):
                self.take()
                node = (tok, node, self.unary())
            elif tok is not None and (tok == "(" or tok[0].isalnum() or tok[0] == "_"):
                node = ("*", node, self.unary())
            else:
                return node

    def unary(self):
        tok = self.peek()
        if tok == "-":
            self.take()
            return ("neg", self.unary())
        if tok == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            sign = 1
            while self.peek() in ("-", "+"):
                if self.take() == "-":
                    sign = -sign
            tok = self.take()
            if tok == "(":
                exp = self.expr()
                self.take(")")
                if exp[0] != "num":
                    raise ParseError("exponent must be an integer literal")
                e = exp[1]
            elif tok.isdigit():
                e = int(tok)
            else:
                raise ParseError(f"exponent must be an integer literal, found {tok!r}")
            return ("pow", base, sign * e)
        return base

    def atom(self):
        tok = self.take()
        if tok == "(":
            node = self.expr()
            self.take(")")
            return node
        if tok.isdigit():
            return ("num", int(tok))
        if tok[0].isalpha() or tok[0] == "_":
            return ("var", tok)
        raise ParseError(f"unexpected token {tok!r}")


def parse_tree(text: str):
    p = _Parser(tokenize(text))
    if p.peek() is None:
        raise ParseError("empty expression")
    node = p.expr()
    if p.peek() is not None:
        raise ParseError(f"trailing input at {p.peek()!r}")
    return node


def fold(node, ring: Ring):
    kind = node[0]
    if kind == "num":
        return ring.const(Fraction(node[1]))
    if kind == "var":
        return ring.var(node[1])
    if kind == "neg":
        return ring.neg(fold(node[1], ring))
    if kind == "pow":
        return ring.pow(fold(node[1], ring), node[2])
    a, b = fold(node[1], ring), fold(node[2], ring)
    return {"+": ring.add, "-": ring.sub, "*": ring.mul, "/": ring.div}[kind](a, b)


def variables(node) -> set[str]:
    if node[0] == "var":
        return {node[1]}
    out: set[str] = set()
    for child in node[1:]:
        if isinstance(child, tuple):
            out |= variables(child)
    return out
