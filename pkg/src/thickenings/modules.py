"""Graded free modules, module orders and graded maps between free modules.

A vector in a free module is a dict ``{key: coefficient}``.  The key of the
term ``m * e_i`` is an integer produced by a :class:`TermOrder`; integer order
of keys is the module order, and multiplying a vector by a monomial ``u``
adds the same integer ``order.shift(u)`` to every key.
"""

from __future__ import annotations

from math import comb

from .errors import InvalidInput, NotHomogeneous, RingMismatch
from .ring import Polynomial


def _slot_bits(rank):
    return max(1, (rank + 1).bit_length())


class TermOrder:
    """Module monomial order on ``R^rank``.

    The key of ``m * e_i`` is ``((base[i] + (delta(m) << sc)) << sb) | (smask - i)``.
    The ``base`` offsets encode the order type:

    * graded term-over-position: ``base[i]`` is the key of a virtual monomial
      of degree ``twists[i]``;
    * Schreyer order: ``base[i]`` is the key of the leading term of the i-th
      column of a map into another module (``sc`` is that module's scale);
    * position over term: a large offset per position on top of the above.

    Ties between equal shifted monomials go to the smaller index.
    """

    __slots__ = ("ring", "rank", "twists", "base", "sc", "sb", "smask", "bits", "kind")

    def __init__(self, ring, twists, base, sc, sb=None, kind="top"):
        self.ring = ring
        self.rank = len(twists)
        self.twists = list(twists)
        self.base = list(base)
        self.sc = sc
        self.sb = _slot_bits(self.rank) if sb is None else sb
        self.smask = (1 << self.sb) - 1
        if self.rank > self.smask:
            raise InvalidInput("slot field too narrow")
        top = max((abs(b) for b in self.base), default=0)
        self.bits = max(top.bit_length(), ring.total_bits + sc) + self.sb + 2
        self.kind = kind

    # construction --------------------------------------------------------
    @classmethod
    def graded(cls, ring, twists, sb=None):
        if ring._deg_shift is None and any(twists):
            raise InvalidInput("twisted module over a ring without a degree row")
        ds = ring._deg_shift or 0
        base = [(t << ds) + ring.low_mask for t in twists]
        return cls(ring, twists, base, 0, sb)

    @classmethod
    def pot(cls, ring, twists):
        ds = ring._deg_shift or 0
        big = 1 << (ring.total_bits + 4)
        r = len(twists)
        base = [((r - 1 - i) * big) + (t << ds) + ring.low_mask for i, t in enumerate(twists)]
        return cls(ring, twists, base, 0, kind="pot")

    @classmethod
    def schreyer(cls, target, lead_keys, degrees, sb=None):
        """Order induced on the source of a map whose columns lead with ``lead_keys``."""
        return cls(target.ring, degrees, lead_keys, target.sc + target.sb, sb, kind="schreyer")

    @classmethod
    def augmented(cls, target, lead_keys, degrees):
        """Order on ``target (+) R^m`` eliminating the target block.

        Slots ``0..target.rank-1`` are the target; they dominate every slot of
        the tracking block, which carries the Schreyer order of ``lead_keys``.
        """
        big = 1 << (target.bits + 1)
        base = [big + target.key(0, i) for i in range(target.rank)] + list(lead_keys)
        return cls(target.ring, list(target.twists) + list(degrees), base, target.sc + target.sb, kind="aug")

    # keys ------------------------------------------------------------------
    def key(self, m, i):
        return ((self.base[i] + (self.ring.delta(m) << self.sc)) << self.sb) | (self.smask - i)

    def shift(self, u):
        return self.ring.delta(u) << (self.sc + self.sb)

    def slot(self, k):
        return self.smask - (k & self.smask)

    def decode(self, k):
        i = self.smask - (k & self.smask)
        d = ((k >> self.sb) - self.base[i]) >> self.sc
        return self.ring.from_delta(d), i

    def degree(self, k):
        m, i = self.decode(k)
        return self.ring.mono_degree(m) + self.twists[i]

    def vector_degree(self, vec):
        """Degree of a homogeneous vector (``None`` for zero)."""
        if not vec:
            return None
        ds = {self.degree(k) for k in vec}
        if len(ds) != 1:
            raise NotHomogeneous(f"vector has terms in degrees {sorted(ds)}")
        return ds.pop()

    # conversion ------------------------------------------------------------
    def from_columns(self, entries):
        """Vector from ``{slot: Polynomial}``."""
        out = {}
        r = self.ring
        for i, p in entries.items():
            if p.ring != r:
                raise RingMismatch("entry from a different ring")
            for k, c in p._t.items():
                out[self.key(r.mono(k), i)] = c
        return out

    def to_columns(self, vec):
        """``{slot: Polynomial}`` from a vector."""
        r = self.ring
        parts = {}
        for k, c in vec.items():
            m, i = self.decode(k)
            parts.setdefault(i, {})[r.key(m)] = c
        return {i: Polynomial(r, t) for i, t in parts.items()}

    def recode(self, vec, other, slot_map=None):
        """Re-key ``vec`` from this order into ``other`` (optionally moving slots)."""
        out = {}
        for k, c in vec.items():
            m, i = self.decode(k)
            j = i if slot_map is None else slot_map(i)
            if j is None:
                continue
            out[other.key(m, j)] = c
        return out


def vec_add(a, b, coef, mod):
    """``a + coef * b`` in place on ``a``."""
    for k, c in b.items():
        v = a.get(k, 0) + coef * c
        if mod:
            v %= mod
        if v:
            a[k] = v
        else:
            a.pop(k, None)
    return a


def vec_scale(a, coef, mod):
    if mod:
        return {k: c * coef % mod for k, c in a.items()}
    return {k: c * coef for k, c in a.items()}


def vec_mul_poly(order, vec, poly_terms):
    """``p * vec`` where ``poly_terms`` is a ring-keyed dict."""
    r = order.ring
    mod = r.field.p
    out = {}
    for pk, pc in poly_terms.items():
        sh = order.shift(r.mono(pk))
        for k, c in vec.items():
            kk = k + sh
            v = out.get(kk, 0) + pc * c
            if mod:
                v %= mod
            if v:
                out[kk] = v
            else:
                del out[kk]
    return out


# ---------------------------------------------------------------------------
# public value types


class GradedFreeModule:
    """``(+)_l R(-a_l)`` for the list of twists ``a_l``."""

    def __init__(self, ring, twists):
        self.ring = ring
        self.twists = tuple(int(a) for a in twists)

    @property
    def rank(self):
        return len(self.twists)

    def component_dim(self, d):
        n = self.ring.n
        return sum(comb(d - a + n - 1, n - 1) for a in self.twists if d - a >= 0)

    def component_basis(self, d):
        """Ordered basis of the degree-``d`` part: ``(slot, packed monomial)`` pairs."""
        out = []
        cache = {}
        for slot, a in enumerate(self.twists):
            e = d - a
            if e < 0:
                continue
            if e not in cache:
                cache[e] = self.ring.monomials_of_degree(e)
            out.extend((slot, m) for m in cache[e])
        return out

    def dual(self):
        return GradedFreeModule(self.ring, [-a for a in self.twists])

    def __eq__(self, other):
        return isinstance(other, GradedFreeModule) and other.ring == self.ring and other.twists == self.twists

    def __hash__(self):
        return hash((self.ring, self.twists))

    def __repr__(self):
        return f"GradedFreeModule(twists={list(self.twists)})"


class ModuleMap:
    """A degree-zero graded map ``source -> target`` given by a polynomial matrix.

    ``entries[r][c]`` is the coefficient of target generator ``r`` in the image
    of source generator ``c``.
    """

    def __init__(self, source, target, entries, check=True):
        self.source = source
        self.target = target
        self.entries = [list(row) for row in entries]
        if check:
            self._validate()

    @classmethod
    def from_columns(cls, source, target, columns, check=True):
        ring = target.ring
        entries = [[ring.zero() for _ in range(source.rank)] for _ in range(target.rank)]
        for c, col in enumerate(columns):
            for r, p in col.items():
                entries[r][c] = p
        return cls(source, target, entries, check=check)

    def _validate(self):
        if len(self.entries) != self.target.rank or any(len(row) != self.source.rank for row in self.entries):
            raise InvalidInput("matrix shape does not match the modules")
        for r, row in enumerate(self.entries):
            for c, p in enumerate(row):
                if p:
                    want = self.source.twists[c] - self.target.twists[r]
                    if not p.is_homogeneous() or p.degree != want:
                        raise NotHomogeneous(
                            f"entry ({r},{c}) has degree {sorted(p.degrees())}, expected {want}"
                        )

    @property
    def ring(self):
        return self.target.ring

    def column(self, c):
        return {r: self.entries[r][c] for r in range(self.target.rank) if self.entries[r][c]}

    def columns(self):
        return [self.column(c) for c in range(self.source.rank)]

    def compose(self, other):
        """``self o other``."""
        ring = self.ring
        rows, inner, cols = self.target.rank, self.source.rank, other.source.rank
        out = [[ring.zero() for _ in range(cols)] for _ in range(rows)]
        for r in range(rows):
            for k in range(inner):
                a = self.entries[r][k]
                if not a:
                    continue
                for c in range(cols):
                    b = other.entries[k][c]
                    if b:
                        out[r][c] = out[r][c] + a * b
        return ModuleMap(other.source, self.target, out, check=False)

    def is_zero(self):
        return all(not p for row in self.entries for p in row)

    def transpose(self):
        """The dual map ``Hom(target, R) -> Hom(source, R)``."""
        ent = [[self.entries[r][c] for r in range(self.target.rank)] for c in range(self.source.rank)]
        return ModuleMap(self.target.dual(), self.source.dual(), ent, check=False)

    def __eq__(self, other):
        return (
            isinstance(other, ModuleMap)
            and self.source == other.source
            and self.target == other.target
            and self.entries == other.entries
        )

    def __repr__(self):
        body = "\n".join("  [" + ", ".join(p.to_str() for p in row) + "]" for row in self.entries)
        return f"ModuleMap({self.target.rank}x{self.source.rank}\n{body}\n)"
