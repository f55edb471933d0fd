"""Text syntax for polynomials: ``v*z - w*y``, ``3/2*x^2 + (x+y)^3``."""

from __future__ import annotations

import re

from .errors import NotHomogeneous, ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^(),]))")


def tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("int", int(m.group(1)), start))
        elif m.group(2):
            out.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _PolyParser:
    def __init__(self, ring, text):
        self.ring = ring
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos, self.text)

    def parse(self):
        value = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError("trailing input", pos, self.text)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                value = value * self.unary()
            elif kind == "op" and val == "/":
                self.take()
                kind2, den, pos2 = self.take()
                if kind2 != "int" or den == 0:
                    raise ParseError("division only by nonzero integer constants", pos2, self.text)
                value = value.scale(self.ring.field.inv(self.ring.field(den)))
            else:
                return value

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind2, e, pos2 = self.take()
            if kind2 != "int":
                raise ParseError("exponent must be a non-negative integer", pos2, self.text)
            return base**e
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            return self.ring.const(val)
        if kind == "name":
            if val not in self.ring.names:
                raise ParseError(f"unknown variable {val!r}", pos, self.text)
            return self.ring.var(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError("expected a number, variable or '('", pos, self.text)


def parse_polynomial(ring, text, homogeneous=False):
    poly = _PolyParser(ring, text).parse()
    if homogeneous and not poly.is_homogeneous():
        raise NotHomogeneous(f"{text!r} is not homogeneous")
    return poly
