"""Coefficient fields, monomial orders, polynomial rings and polynomials.

Monomials are stored as packed Python integers.  Each exponent occupies a
16-bit field (the top bit of every field is a guard bit used for divisibility
tests), and the weight rows of the monomial order sit above the exponent
fields.  With that layout

* multiplication of monomials is integer addition,
* ``m ^ ring.low_mask`` is an integer whose natural ordering *is* the monomial
  order (the exponent fields are complemented, which gives the reverse
  lexicographic tie break),
* ``a | b`` is a single subtract-and-mask.

Polynomials are dictionaries keyed by that order key.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _iproduct
from math import comb

import gmpy2

from .errors import InvalidInput, NotDivisible, RingMismatch

FIELD_BITS = 16
FIELD_MASK = (1 << FIELD_BITS) - 1
_GUARD = 1 << (FIELD_BITS - 1)
MAX_EXPONENT = _GUARD - 1


# ---------------------------------------------------------------------------
# fields


class Field:
    """The rationals (``p == 0``) or the prime field with ``p`` elements."""

    __slots__ = ("p",)

    def __init__(self, p=0):
        p = int(p)
        if p != 0 and not (p > 1 and gmpy2.is_prime(p)):
            raise InvalidInput(f"characteristic {p} is not a prime")
        self.p = p

    @property
    def characteristic(self):
        return self.p

    @property
    def is_rational(self):
        return self.p == 0

    def __call__(self, x):
        if self.p:
            if isinstance(x, (Fraction, type(gmpy2.mpq()))):
                num, den = int(x.numerator), int(x.denominator)
                if den % self.p == 0:
                    raise ZeroDivisionError(f"denominator {den} vanishes mod {self.p}")
                return num * pow(den, -1, self.p) % self.p
            return int(x) % self.p
        if isinstance(x, str):
            return gmpy2.mpq(Fraction(x))
        return gmpy2.mpq(x)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(int(a), -1, self.p)
        return 1 / a

    def normalize(self, a):
        return a % self.p if self.p else a

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    @property
    def name(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def __repr__(self):
        return self.name

    def to_str(self, a):
        return str(a)


QQ = Field(0)


def GF(p):
    return Field(p)


def field_from_name(name):
    """Parse ``Q``/``QQ`` or ``GF(p)``/``F_p``/``Fp``/``ZZ/p`` into a :class:`Field`."""
    s = str(name).strip().replace(" ", "")
    if s.upper() in ("Q", "QQ"):
        return QQ
    for prefix in ("GF(", "F_", "ZZ/", "Z/"):
        if s.upper().startswith(prefix.upper()):
            body = s[len(prefix):].rstrip(")")
            return Field(int(body))
    if s[:1] in ("F", "f") and s[1:].isdigit():
        return Field(int(s[1:]))
    if s.isdigit():
        return Field(int(s))
    raise InvalidInput(f"unknown field {name!r}")


# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order given by weight rows with a reverse-lex tie break.

    ``kind`` is one of ``"grevlex"``, ``"lex"``, ``"elim"`` (the first
    ``block_size`` variables are eliminated) or ``"pot"`` (position over
    term on free modules, comparing positions by ascending index, on top of
    ``base``).
    """

    kind: str = "grevlex"
    block_size: int = 0
    base: "MonomialOrder | None" = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "elim", "pot"):
            raise InvalidInput(f"unknown monomial order {self.kind!r}")
        if self.kind == "pot" and self.base is None:
            object.__setattr__(self, "base", MonomialOrder("grevlex"))

    def ring_order(self):
        return self.base if self.kind == "pot" else self

    def weight_rows(self, weights):
        n = len(weights)
        order = self.ring_order()
        if order.kind == "grevlex":
            return [tuple(weights)]
        if order.kind == "lex":
            return [tuple(int(i == r) for i in range(n)) for r in range(n)]
        k = order.block_size
        if not 0 < k < n:
            raise InvalidInput("elimination block must be a proper nonempty prefix")
        block = tuple(weights[i] if i < k else 0 for i in range(n))
        return [block, tuple(weights)]


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def Elimination(block_size):
    return MonomialOrder("elim", block_size)


def PositionOverTerm(base=GREVLEX):
    return MonomialOrder("pot", base=base)


# ---------------------------------------------------------------------------
# rings


class PolyRing:
    """``F[x_0, ..., x_n]`` with a fixed monomial order.

    ``weights`` defaults to the standard grading (all ones); non-standard
    weights are only used for the internal rings built by elimination.
    """

    def __init__(self, var_names, field=QQ, order=GREVLEX, weights=None):
        if isinstance(var_names, str):
            var_names = [v.strip() for v in var_names.replace(",", " ").split()]
        names = tuple(str(v) for v in var_names)
        if not names:
            raise InvalidInput("a polynomial ring needs at least one variable")
        if len(set(names)) != len(names):
            raise InvalidInput(f"duplicate variable names in {names}")
        if isinstance(order, str):
            order = MonomialOrder(order)
        self.names = names
        self.n = len(names)
        self.field = field
        self.order = order.ring_order()
        self.weights = tuple(int(w) for w in (weights or [1] * self.n))
        if len(self.weights) != self.n or min(self.weights) < 1:
            raise InvalidInput("weights must be positive, one per variable")

        n = self.n
        self.rows = self.order.weight_rows(self.weights)
        self.nrows = len(self.rows)
        self.total_bits = (n + self.nrows) * FIELD_BITS
        self.low_mask = sum(FIELD_MASK << (i * FIELD_BITS) for i in range(n))
        self.high_mask = sum(FIELD_MASK << ((n + r) * FIELD_BITS) for r in range(self.nrows))
        self.guards = sum(_GUARD << (i * FIELD_BITS) for i in range(n + self.nrows))
        self._row_shift = [(n + self.nrows - 1 - r) * FIELD_BITS for r in range(self.nrows)]
        self._deg_shift = None
        for r, row in enumerate(self.rows):
            if row == self.weights:
                self._deg_shift = self._row_shift[r]
                break
        self._var_packed = [self.pack(tuple(int(i == j) for i in range(n))) for j in range(n)]
        self._sig = (names, field, self.order, self.weights)

    # identity -----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, PolyRing) and other._sig == self._sig

    def __hash__(self):
        return hash(self._sig)

    def __repr__(self):
        return f"PolyRing({self.field!r}, {','.join(self.names)}; {self.order.kind})"

    def with_order(self, order):
        return PolyRing(self.names, self.field, order, self.weights)

    def with_field(self, field):
        return PolyRing(self.names, field, self.order, self.weights)

    # packed monomials ----------------------------------------------------
    def pack(self, exps):
        if len(exps) != self.n:
            raise RingMismatch(f"exponent vector of length {len(exps)} in a ring with {self.n} variables")
        m = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MAX_EXPONENT:
                raise InvalidInput(f"exponent {e} out of range")
            m |= e << (i * FIELD_BITS)
        for r, row in enumerate(self.rows):
            m |= sum(w * e for w, e in zip(row, exps)) << self._row_shift[r]
        return m

    def unpack(self, m):
        return tuple((m >> (i * FIELD_BITS)) & FIELD_MASK for i in range(self.n))

    def mono_degree(self, m):
        if self._deg_shift is not None:
            return (m >> self._deg_shift) & FIELD_MASK
        return sum(w * e for w, e in zip(self.weights, self.unpack(m)))

    def key(self, m):
        return m ^ self.low_mask

    def mono(self, key):
        return key ^ self.low_mask

    def delta(self, u):
        """Additive shift of order keys under multiplication by ``u``."""
        return (u & self.high_mask) - (u & self.low_mask)

    def from_delta(self, d):
        low = (-d) & self.low_mask
        return (d + low) | low

    def divides(self, a, b):
        g = self.guards
        return (((b | g) - a) & g) == g

    def lcm(self, a, b):
        return self.pack(tuple(max(x, y) for x, y in zip(self.unpack(a), self.unpack(b))))

    def var_mono(self, i):
        return self._var_packed[i]

    def component_size(self, d):
        """Number of monomials of degree ``d`` (standard grading only)."""
        if d < 0:
            return 0
        if all(w == 1 for w in self.weights):
            return comb(d + self.n - 1, self.n - 1)
        return len(self.monomials_of_degree(d))

    def monomials_of_degree(self, d):
        """Packed monomials of (weighted) degree ``d`` in decreasing order."""
        if d < 0:
            return []
        out = []

        def rec(i, left, acc):
            if i == self.n - 1:
                if left % self.weights[i] == 0:
                    out.append(tuple(acc) + (left // self.weights[i],))
                return
            for e in range(left // self.weights[i], -1, -1):
                acc.append(e)
                rec(i + 1, left - e * self.weights[i], acc)
                acc.pop()

        rec(0, d, [])
        monos = [self.pack(e) for e in out]
        monos.sort(key=self.key, reverse=True)
        return monos

    # elements ------------------------------------------------------------
    def gens(self):
        return [self.var(i) for i in range(self.n)]

    def var(self, i):
        if isinstance(i, str):
            i = self.names.index(i)
        return Polynomial(self, {self.key(self._var_packed[i]): self.field.one})

    def __getitem__(self, name):
        return self.var(name)

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = self.field(c)
        return Polynomial(self, {self.key(0): c} if c else {})

    def monomial(self, exps, coeff=1):
        c = self.field(coeff)
        return Polynomial(self, {self.key(self.pack(tuple(exps))): c} if c else {})

    def from_terms(self, terms):
        """Build a polynomial from ``(exponents, coefficient)`` pairs."""
        t = {}
        mod = self.field.p
        for exps, c in terms:
            k = self.key(self.pack(tuple(exps)))
            v = t.get(k, 0) + self.field(c)
            if mod:
                v %= mod
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return Polynomial(self, t)

    def parse(self, text, homogeneous=False):
        from .parsing import parse_polynomial

        return parse_polynomial(self, text, homogeneous=homogeneous)

    def __call__(self, x):
        if isinstance(x, Polynomial):
            return x.change_ring(self)
        if isinstance(x, str):
            return self.parse(x)
        return self.const(x)


# ---------------------------------------------------------------------------
# monomials


class Monomial:
    """An exponent vector in a given ring."""

    __slots__ = ("ring", "exponents", "_m")

    def __init__(self, ring, exponents):
        self.ring = ring
        self.exponents = tuple(int(e) for e in exponents)
        self._m = ring.pack(self.exponents)

    @classmethod
    def _from_packed(cls, ring, m):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.exponents = ring.unpack(m)
        obj._m = m
        return obj

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatch("monomials from different rings")

    @property
    def degree(self):
        return self.ring.mono_degree(self._m)

    def __mul__(self, other):
        self._check(other)
        return Monomial._from_packed(self.ring, self._m + other._m)

    def lcm(self, other):
        self._check(other)
        return Monomial._from_packed(self.ring, self.ring.lcm(self._m, other._m))

    def divides(self, other):
        self._check(other)
        return self.ring.divides(self._m, other._m)

    def __truediv__(self, other):
        self._check(other)
        if not other.divides(self):
            raise NotDivisible(f"{other} does not divide {self}")
        return Monomial._from_packed(self.ring, self._m - other._m)

    def compare(self, other):
        """-1, 0 or 1 according to the ring's monomial order."""
        self._check(other)
        a, b = self.ring.key(self._m), self.ring.key(other._m)
        return (a > b) - (a < b)

    def __lt__(self, other):
        return self.compare(other) < 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.ring == other.ring and self._m == other._m

    def __hash__(self):
        return hash((self.ring, self._m))

    def __repr__(self):
        return _mono_str(self.ring, self.exponents) or "1"


def _mono_str(ring, exps):
    parts = []
    for name, e in zip(ring.names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """An immutable sparse polynomial.

    Terms are stored in a dict keyed by order keys of the ring; iteration in
    decreasing key order gives the terms from the leading one down.
    """

    __slots__ = ("ring", "_t", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self._t = terms
        self._hash = None

    # inspection ------------------------------------------------------------
    def is_zero(self):
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def __len__(self):
        return len(self._t)

    def terms(self):
        """``[(Monomial, coefficient), ...]`` in strictly decreasing order."""
        r = self.ring
        return [(Monomial._from_packed(r, r.mono(k)), self._t[k]) for k in sorted(self._t, reverse=True)]

    def exponent_terms(self):
        r = self.ring
        return [(r.unpack(r.mono(k)), self._t[k]) for k in sorted(self._t, reverse=True)]

    def leading_term(self):
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        k = max(self._t)
        return Monomial._from_packed(self.ring, self.ring.mono(k)), self._t[k]

    def leading_monomial(self):
        return self.leading_term()[0]

    def leading_coefficient(self):
        return self.leading_term()[1]

    def degrees(self):
        r = self.ring
        return {r.mono_degree(r.mono(k)) for k in self._t}

    @property
    def degree(self):
        """Degree of the polynomial (``-1`` for zero)."""
        ds = self.degrees()
        return max(ds) if ds else -1

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def is_constant(self):
        return all(k == self.ring.low_mask for k in self._t)

    def coefficient(self, exps):
        r = self.ring
        return self._t.get(r.key(r.pack(tuple(exps))), r.field.zero)

    # arithmetic ------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)) or type(other) is type(gmpy2.mpq()):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, _add(self._t, other._t, 1, self.ring.field.p))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, _add(self._t, other._t, -1, self.ring.field.p))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        mod = self.ring.field.p
        return Polynomial(self.ring, {k: (-c) % mod if mod else -c for k, c in self._t.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, poly_mul(self.ring, self._t, other._t))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c):
        c = self.ring.field(c)
        mod = self.ring.field.p
        if not c:
            return self.ring.zero()
        if mod:
            return Polynomial(self.ring, {k: v * c % mod for k, v in self._t.items()})
        return Polynomial(self.ring, {k: v * c for k, v in self._t.items()})

    def monic(self):
        if not self._t:
            return self
        return self.scale(self.ring.field.inv(self._t[max(self._t)]))

    def mul_monomial(self, exps):
        r = self.ring
        sh = r.delta(r.pack(tuple(exps)))
        return Polynomial(r, {k + sh: c for k, c in self._t.items()})

    # conversions -----------------------------------------------------------
    def change_ring(self, ring, var_map=None):
        """Reinterpret in ``ring`` (same variable names or explicit index map)."""
        src = self.ring
        if var_map is None:
            try:
                var_map = [ring.names.index(nm) for nm in src.names]
            except ValueError as exc:
                raise RingMismatch(f"variable missing in target ring: {exc}") from None
        terms = []
        for exps, c in self.exponent_terms():
            new = [0] * ring.n
            for i, e in enumerate(exps):
                if e:
                    new[var_map[i]] += e
            if src.field.p and not ring.field.p:
                c = int(c)
            terms.append((new, c))
        return ring.from_terms(terms)

    def evaluate(self, values):
        """Substitute field elements (or polynomials) for the variables."""
        total = None
        for exps, c in self.exponent_terms():
            term = c
            for v, e in zip(values, exps):
                if e:
                    term = term * v**e
            total = term if total is None else total + term
        if total is None:
            return self.ring.field.zero
        if isinstance(total, Polynomial) or not self.ring.field.p:
            return total
        return total % self.ring.field.p

    def substitute(self, images):
        """Ring map sending variable ``i`` to the polynomial ``images[i]``."""
        target = images[0].ring
        result = target.zero()
        cache = {}
        for exps, c in self.exponent_terms():
            term = target.const(int(c) if self.ring.field.p else c)
            for i, e in enumerate(exps):
                if e:
                    if (i, e) not in cache:
                        cache[(i, e)] = images[i] ** e
                    term = term * cache[(i, e)]
            result = result + term
        return result

    # identity --------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._t.items())))
        return self._hash

    def __repr__(self):
        return self.to_str()

    def to_str(self):
        if not self._t:
            return "0"
        out = []
        for exps, c in self.exponent_terms():
            mono = _mono_str(self.ring, exps)
            if self.ring.field.p:
                neg, a = False, c
            else:
                neg, a = c < 0, abs(c)
            if a == 1 and mono:
                body = mono
            elif mono:
                body = f"{a}*{mono}"
            else:
                body = str(a)
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append(("- " if neg else "+ ") + body)
        return " ".join(out)


def _add(a, b, sign, mod):
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + (c if sign > 0 else -c)
        if mod:
            v %= mod
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def poly_mul(ring, a, b):
    if len(a) < len(b):
        a, b = b, a
    mod = ring.field.p
    low = ring.low_mask
    out = {}
    shifts = [(ring.delta(kb ^ low), cb) for kb, cb in b.items()]
    for sh, cb in shifts:
        for ka, ca in a.items():
            k = ka + sh
            v = out.get(k, 0) + ca * cb
            if mod:
                v %= mod
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def all_exponents(n, d):
    """All exponent vectors of length ``n`` and total degree ``d``."""
    if d < 0:
        return []
    return [e for e in _iproduct(range(d + 1), repeat=n) if sum(e) == d] if n <= 3 else _compositions(n, d)


def _compositions(n, d):
    if n == 1:
        return [(d,)]
    out = []
    for e in range(d, -1, -1):
        for rest in _compositions(n - 1, d - e):
            out.append((e,) + rest)
    return out
