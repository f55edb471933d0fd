"""A small language for naming ideals on the command line.

Statements are separated by ``;``::

    ring(Q, u, v, w, x, y, z); ideal minors(2, matrix(2, 3))
    ring(GF(2), u, v, w, x, y, z); I = minors(2, matrix(2, 3)); power(I, 3)
    example("segre_2x3"); bracket(I, 2)
    ring(QQ, x, y); ideal(x^2, y^3)

``ring(F, names...)`` fixes the ring, ``example("name"[, F])`` loads a catalog
entry and binds it to ``I``, ``NAME = expr`` binds a name, and the value of the
last expression (optionally prefixed by ``ideal``) is the result.  Ideal
expressions are ``minors(size, matrix(rows, cols))``, ``ideal(p, ...)`` or
``(p, ...)``, ``power(e, t)``, ``bracket(e, q)`` and bound names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import AlgebraError, InvalidInput, ParseError
from .ideals import GradedIdeal, bracket_power, example_catalog, generic_minors, ideal_power
from .parsing import parse_polynomial
from .ring import PolyRing, field_from_name

_TOK = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\"[^\"]*\"|'[^']*')|([();,=]))")


def _tokens(text):
    out = []
    pos = 0
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _TOK.match(text, pos)
        if m is None or m.lastindex is None:
            # anything else belongs to a polynomial and is scanned raw later
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            out.append(("raw", text[start], start))
            pos = start + 1
            continue
        kind = ("int", "name", "str", "op")[m.lastindex - 1]
        val = m.group(m.lastindex)
        if kind == "int":
            val = int(val)
        elif kind == "str":
            val = val[1:-1]
        out.append((kind, val, m.start(m.lastindex)))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


@dataclass
class IdealResult:
    ideal: GradedIdeal
    canonical: str


class _SpecParser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0
        self.ring = None
        self.env = {}

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok[2], self.text)

    def expect(self, val):
        tok = self.take()
        if tok[0] != "op" or tok[1] != val:
            raise self.error(f"expected {val!r}", tok)
        return tok

    def expect_int(self):
        tok = self.take()
        if tok[0] != "int":
            raise self.error("expected an integer", tok)
        return tok[1]

    # statements --------------------------------------------------------
    def parse(self):
        value = None
        canon = []
        while True:
            tok = self.peek()
            if tok[0] == "end":
                break
            if tok[0] == "op" and tok[1] == ";":
                self.take()
                continue
            v, c = self.statement()
            if c:
                canon.append(c)
            if v is not None:
                value = v
            tok = self.peek()
            if tok[0] == "op" and tok[1] == ";":
                self.take()
            elif tok[0] != "end":
                raise self.error("expected ';'")
        if value is None:
            raise ParseError("no ideal is defined", len(self.text), self.text)
        return IdealResult(value[0], "; ".join(canon))

    def statement(self):
        tok = self.peek()
        if tok[0] == "name" and tok[1] == "ring" and self.toks[self.i + 1][1] == "(":
            self.take()
            return None, self.ring_stmt()
        if tok[0] == "name" and self.toks[self.i + 1][:2] == ("op", "="):
            name = self.take()[1]
            self.take()
            val = self.expr()
            self.env[name] = val
            return val, f"{name} = {val[1]}"
        if tok[0] == "name" and tok[1] == "ideal" and self.toks[self.i + 1][1] != "(":
            self.take()
        val = self.expr()
        return val, val[1]

    def ring_stmt(self):
        self.expect("(")
        start = self.peek()
        field = self.field()
        names = []
        while self.peek()[1] == ",":
            self.take()
            tok = self.take()
            if tok[0] != "name":
                raise self.error("expected a variable name", tok)
            names.append(tok[1])
        self.expect(")")
        if not names:
            raise self.error("a ring needs variables", start)
        if len(set(names)) != len(names):
            raise self.error("repeated variable name", start)
        self.ring = PolyRing(names, field)
        return f"ring({field.name}, {', '.join(names)})"

    def field(self):
        tok = self.take()
        if tok[0] != "name":
            raise self.error("expected a field such as Q or GF(p)", tok)
        text = tok[1]
        if self.peek()[1] == "(":
            self.take()
            text += f"({self.expect_int()})"
            self.expect(")")
        try:
            return field_from_name(text)
        except (InvalidInput, ValueError) as e:
            raise self.error(str(e), tok) from None

    # expressions ---------------------------------------------------------
    def need_ring(self, tok):
        if self.ring is None:
            raise self.error("no ring declared", tok)
        return self.ring

    def expr(self):
        tok = self.take()
        if tok[0] == "op" and tok[1] == "(":
            return self.poly_list(tok)
        if tok[0] != "name":
            raise self.error("expected an ideal expression", tok)
        name = tok[1]
        if name == "example":
            return self.example(tok)
        if name == "minors":
            self.expect("(")
            size = self.expect_int()
            self.expect(",")
            mt = self.take()
            if mt[1] != "matrix":
                raise self.error("expected matrix(rows, cols)", mt)
            self.expect("(")
            r = self.expect_int()
            self.expect(",")
            c = self.expect_int()
            self.expect(")")
            self.expect(")")
            ring = self.need_ring(tok)
            try:
                I = generic_minors(r, c, size, ring)
            except AlgebraError as e:
                raise self.error(str(e), tok) from None
            return I, f"minors({size}, matrix({r}, {c}))"
        if name in ("power", "bracket"):
            self.expect("(")
            inner = self.expr()
            self.expect(",")
            e = self.expect_int()
            self.expect(")")
            if e < 1:
                raise self.error("exponent must be positive", tok)
            J = ideal_power(inner[0], e) if name == "power" else bracket_power(inner[0], e)
            if name == "bracket":
                J.meta = None
            return J, f"{name}({inner[1]}, {e})"
        if name == "ideal":
            lp = self.take()
            if lp[1] != "(":
                raise self.error("expected '('", lp)
            return self.poly_list(lp)
        if name in self.env:
            return self.env[name]
        raise self.error(f"unknown name {name!r}", tok)

    def example(self, tok):
        self.expect("(")
        s = self.take()
        if s[0] not in ("str", "name"):
            raise self.error("expected an example name", s)
        field = None
        if self.peek()[1] == ",":
            self.take()
            field = self.field()
        self.expect(")")
        try:
            from .ring import QQ

            ring, I, _ = example_catalog(s[1], field or QQ)
        except AlgebraError as e:
            raise self.error(str(e), s) from None
        self.ring = ring
        canon = f'example("{s[1]}")' if field is None else f'example("{s[1]}", {field.name})'
        self.env["I"] = (I, canon)
        return I, canon

    def poly_list(self, open_tok):
        """Polynomials up to the matching ')', split at top-level commas."""
        ring = self.need_ring(open_tok)
        start = open_tok[2] + 1
        depth = 0
        pieces = []
        pos = start
        end = None
        for k in range(start, len(self.text)):
            ch = self.text[k]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    end = k
                    break
                depth -= 1
            elif ch == "," and depth == 0:
                pieces.append((pos, self.text[pos:k]))
                pos = k + 1
        if end is None:
            raise ParseError("unbalanced parenthesis", open_tok[2], self.text)
        pieces.append((pos, self.text[pos:end]))
        gens = []
        for off, piece in pieces:
            if not piece.strip():
                raise ParseError("empty generator", off + len(piece), self.text)
            try:
                gens.append(parse_polynomial(ring, piece, homogeneous=True))
            except ParseError as e:
                p = off if e.position is None else off + e.position
                raise ParseError(str(e).split(" (at position")[0], p, self.text) from None
            except AlgebraError as e:
                raise ParseError(str(e), off, self.text) from None
        # skip the tokens consumed as raw text
        while self.peek()[0] != "end" and self.peek()[2] <= end:
            self.take()
        I = GradedIdeal(ring, gens)
        return I, "ideal(" + ", ".join(g.to_str() for g in gens) + ")"


def parse_ideal_spec(text):
    """Parse a spec; returns :class:`IdealResult` (``ideal`` and ``canonical`` text)."""
    if not text or not text.strip():
        raise ParseError("empty spec", 0, text)
    return _SpecParser(text).parse()
