"""Arithmetic expressions over named symbols.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary | '/' NUMBER)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | NAME | '(' expr ')'

Products are evaluated left to right, so the same AST serves commutative
polynomials and graded-commutative dg elements alike.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class ExprSyntaxError(ValueError):
    def __init__(self, message, pos, text=""):
        super().__init__(f"{message} at column {pos + 1}")
        self.pos = pos
        self.text = text


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


def tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            toks.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, tokens, text):
        self.toks = tokens
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg):
        raise ExprSyntaxError(msg, self.peek()[2], self.text)

    def expr(self):
        node = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while True:
            t = self.peek()
            if t[:2] == ("op", "*"):
                self.take()
                node = BinOp("*", node, self.unary())
            elif t[:2] == ("op", "/"):
                self.take()
                if self.peek()[0] != "num":
                    self.error("expected integer divisor")
                node = BinOp("/", node, Num(Fraction(int(self.take()[1]))))
            else:
                return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            if self.peek()[0] != "num":
                self.error("expected integer exponent")
            node = Pow(node, int(self.take()[1]))
        return node

    def atom(self):
        kind, val, _ = self.peek()
        if kind == "num":
            self.take()
            return Num(Fraction(int(val)))
        if kind == "name":
            self.take()
            return Sym(val)
        if (kind, val) == ("op", "("):
            self.take()
            node = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return node
        self.error(f"unexpected {val or 'end of input'!r}")


def parse_expression(text: str):
    p = _Parser(tokenize(text), text)
    node = p.expr()
    if p.peek()[0] != "eof":
        p.error(f"unexpected {p.peek()[1]!r}")
    return node


def evaluate(node, env: dict, const):
    """Evaluate ``node``; ``const`` lifts a Fraction into the value domain."""
    if isinstance(node, Num):
        return const(node.value)
    if isinstance(node, Sym):
        try:
            return env[node.name]
        except KeyError:
            raise KeyError(f"unknown symbol {node.name!r}") from None
    if isinstance(node, Neg):
        return -evaluate(node.arg, env, const)
    if isinstance(node, Pow):
        return evaluate(node.base, env, const) ** node.exp
    a = evaluate(node.left, env, const)
    if node.op == "/":
        return a * (1 / node.right.value)
    b = evaluate(node.right, env, const)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    return a * b


def to_text(node) -> str:
    """Fully parenthesised rendering; parses back to an equal AST."""
    if isinstance(node, Num):
        v = node.value
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Neg):
        return f"-{_wrap(node.arg)}"
    if isinstance(node, Pow):
        return f"{_wrap(node.base)}^{node.exp}"
    if node.op == "/":
        return f"{_wrap(node.left)}/{node.right.value.numerator}"
    return f"{_wrap(node.left)}{'*' if node.op == '*' else ' ' + node.op + ' '}{_wrap(node.right)}"


def _wrap(node):
    if isinstance(node, (Num, Sym)) and not (isinstance(node, Num) and node.value.denominator != 1):
        return to_text(node)
    return f"({to_text(node)})"
