"""Gröbner bases of homogeneous ideals and submodules, normal forms, syzygies
and kernels of ring maps."""

from __future__ import annotations

from ._engine import Basis, Budget
from .errors import InvalidInput, InvariantViolation, NotGradable, NotHomogeneous, RingMismatch
from .modules import GradedFreeModule, ModuleMap, TermOrder
from .ring import Elimination, MonomialOrder, PolyRing, Polynomial


def _ring_order(ring):
    """Order on the rank-one free module that matches the ring's key order."""
    return TermOrder(ring, [0], [ring.low_mask], 0, sb=1)


def _check_homogeneous(polys, ring):
    for p in polys:
        if not isinstance(p, Polynomial) or p.ring != ring:
            raise RingMismatch("generators must lie in one ring")
        if not p.is_homogeneous():
            raise NotHomogeneous(f"{p} is not homogeneous")


class GroebnerBasis:
    """A reduced Gröbner basis of a homogeneous ideal."""

    def __init__(self, ring, generators, reduced=True):
        self.ring = ring
        self.order = ring.order
        self.generators = list(generators)
        self.reduced = reduced
        self._basis = None

    def _engine(self):
        if self._basis is None:
            b = Basis(_ring_order(self.ring))
            o = b.order
            for g in self.generators:
                vec = {o.key(self.ring.mono(k), 0): c for k, c in g._t.items()}
                b.elems.append(vec)
                k = max(vec)
                m, _ = o.decode(k)
                b.lead.append((k, m, 0, self.ring.mono_degree(m)))
                b.reducers.setdefault(0, []).append((m, len(b.elems) - 1))
            self._basis = b
        return self._basis

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def leading_monomials(self):
        return [g.leading_monomial() for g in self.generators]

    def normal_form(self, f):
        if f.ring != self.ring:
            raise RingMismatch("polynomial from another ring")
        b = self._engine()
        o = b.order
        vec = {o.key(self.ring.mono(k), 0): c for k, c in f._t.items()}
        rem = b.full_reduce(vec)
        return Polynomial(self.ring, {self.ring.key(o.decode(k)[0]): c for k, c in rem.items()})

    def contains(self, f):
        return not self.normal_form(f)

    def s_pair_audit(self):
        """True when every S-polynomial reduces to zero (Buchberger's criterion)."""
        return all(not s for s in self.s_polynomial_remainders())

    def s_polynomial_remainders(self):
        ring = self.ring
        gens = self.generators
        out = []
        for a in range(len(gens)):
            ma, ca = gens[a].leading_term()
            for b in range(a + 1, len(gens)):
                mb, cb = gens[b].leading_term()
                L = ma.lcm(mb)
                s = gens[a].mul_monomial((L / ma).exponents).scale(ring.field.inv(ca)) - gens[
                    b
                ].mul_monomial((L / mb).exponents).scale(ring.field.inv(cb))
                out.append(self.normal_form(s))
        return out

    def is_reduced(self):
        lts = self.leading_monomials()
        for i, g in enumerate(self.generators):
            if g.leading_coefficient() != 1:
                return False
            others = [m for j, m in enumerate(lts) if j != i]
            for mono, _ in g.terms():
                if any(o.divides(mono) for o in others):
                    return False
        return True

    def __eq__(self, other):
        return isinstance(other, GroebnerBasis) and self.ring == other.ring and self.generators == other.generators

    def __repr__(self):
        return "GroebnerBasis([" + ", ".join(g.to_str() for g in self.generators) + "])"


def buchberger(gens, order=None, budget=None):
    """Reduced Gröbner basis of the ideal generated by ``gens``."""
    gens = [g for g in gens if g]
    if not gens:
        raise InvalidInput("need at least one nonzero generator; pass a ring-aware empty ideal instead")
    ring = gens[0].ring
    _check_homogeneous(gens, ring)
    if order is not None:
        if isinstance(order, str):
            order = MonomialOrder(order)
        if order.ring_order() != ring.order:
            target = ring.with_order(order)
            gens = [g.change_ring(target) for g in gens]
            ring = target
    return _buchberger(ring, gens, budget)


def _buchberger(ring, gens, budget=None):
    o = _ring_order(ring)
    vecs = [{o.key(ring.mono(k), 0): c for k, c in g._t.items()} for g in gens if g]
    b = Basis(o, budget=_as_budget(budget))
    b.run(vecs)
    out = []
    for vec in b.interreduced():
        out.append(Polynomial(ring, {ring.key(o.decode(k)[0]): c for k, c in vec.items()}))
    return GroebnerBasis(ring, out, reduced=True)


def empty_basis(ring):
    return GroebnerBasis(ring, [], reduced=True)


def normal_form(f, G):
    return G.normal_form(f)


# ---------------------------------------------------------------------------
# modules


class ModuleGroebnerBasis:
    """Reduced Gröbner basis of the column span of a map into a free module."""

    def __init__(self, target, order, vectors):
        self.target = target
        self.order = order
        self.vectors = vectors
        self._basis = None

    def __len__(self):
        return len(self.vectors)

    def columns(self):
        return [self.order.to_columns(v) for v in self.vectors]

    def leading_positions(self):
        return [self.order.decode(max(v)) for v in self.vectors]

    def _engine(self):
        if self._basis is None:
            b = Basis(self.order)
            for v in self.vectors:
                k = max(v)
                m, s = self.order.decode(k)
                b.elems.append(v)
                b.lead.append((k, m, s, self.order.degree(k)))
                b.reducers.setdefault(s, []).append((m, len(b.elems) - 1))
            self._basis = b
        return self._basis

    def reduce(self, column):
        b = self._engine()
        return self.order.to_columns(b.full_reduce(self.order.from_columns(column)))

    def s_pair_audit(self):
        b = self._engine()
        n = len(b.elems)
        for i in range(n):
            for j in range(i + 1, n):
                if b.lead[i][2] != b.lead[j][2]:
                    continue
                L = b.ring.lcm(b.lead[i][1], b.lead[j][1])
                if b.full_reduce(b._spoly(i, j, L)):
                    return False
        return True


def module_groebner(cols, order="pot", budget=None):
    """Gröbner basis of the span of the columns of ``cols``."""
    target = cols.target
    ring = target.ring
    if order == "pot":
        o = TermOrder.pot(ring, target.twists)
    else:
        o = TermOrder.graded(ring, target.twists)
    vecs = [o.from_columns(c) for c in cols.columns()]
    b = Basis(o, budget=_as_budget(budget))
    b.run([v for v in vecs if v])
    return ModuleGroebnerBasis(target, o, b.interreduced())


def syzygy_basis(cols, budget=None):
    """Minimal generators of the homogeneous relations among the columns."""
    src, tgt = cols.source, cols.target
    ring = tgt.ring
    F = TermOrder.graded(ring, tgt.twists)
    colvecs = [F.from_columns(c) for c in cols.columns()]
    nonzero = [l for l, v in enumerate(colvecs) if v]
    r = tgt.rank
    columns = [{l: ring.one()} for l, v in enumerate(colvecs) if not v]
    twists = [src.twists[l] for l, v in enumerate(colvecs) if not v]
    if nonzero:
        aug = TermOrder.augmented(F, [max(colvecs[l]) for l in nonzero], [src.twists[l] for l in nonzero])
        gens = []
        for pos, l in enumerate(nonzero):
            g = F.recode(colvecs[l], aug)
            g[aug.key(0, r + pos)] = ring.field.one
            gens.append(g)
        b = Basis(aug, track_from=r, budget=_as_budget(budget))
        b.run(gens, [src.twists[l] for l in nonzero])
        for i in b.min_syz:
            vec = b.elems[i]
            col = {}
            for k, c in vec.items():
                m, s = aug.decode(k)
                col.setdefault(nonzero[s - r], {})[ring.key(m)] = c
            columns.append({s: Polynomial(ring, t) for s, t in col.items()})
            twists.append(aug.vector_degree(vec))
    out = GradedFreeModule(ring, twists)
    return ModuleMap.from_columns(out, src, columns)


def _as_budget(budget):
    return budget if isinstance(budget, Budget) else Budget(budget)


# ---------------------------------------------------------------------------
# elimination


def kernel_of_ring_map(source_ring, images, target_ideal=None, budget=None):
    """Generators (reduced GB) of ``ker(source_ring -> target, x_i -> images[i])``.

    ``target_ideal`` optionally lists relations of the target ring, so that the
    map goes to a quotient.  Images must be homogeneous of one common degree.
    """
    if len(images) != source_ring.n:
        raise RingMismatch("need one image per source variable")
    images = list(images)
    tgt = images[0].ring
    nz = [p for p in images if p]
    if not all(p.is_homogeneous() for p in images):
        raise NotHomogeneous("images must be homogeneous")
    degs = {p.degree for p in nz}
    if len(degs) > 1:
        raise NotGradable(f"images have different degrees {sorted(degs)}")
    e = degs.pop() if degs else 1
    if e < 1:
        raise NotGradable("images must have positive degree")
    names = list(tgt.names) + [nm if nm not in tgt.names else nm + "_" for nm in source_ring.names]
    elim = PolyRing(names, tgt.field, Elimination(tgt.n), [1] * tgt.n + [e] * source_ring.n)
    tvar = list(range(tgt.n))
    gens = []
    for i, p in enumerate(images):
        gens.append(elim.var(tgt.n + i) - p.change_ring(elim, tvar))
    for q in target_ideal or []:
        gens.append(q.change_ring(elim, tvar))
    G = _buchberger(elim, gens, budget)
    block = sum(0xFFFF << (16 * i) for i in range(tgt.n))
    keep = []
    for g in G.generators:
        if all(((elim.mono(k)) & block) == 0 for k in g._t):
            keep.append(g)
    back = list(range(tgt.n, tgt.n + source_ring.n))
    src_map = [None] * elim.n
    for j, pos in enumerate(back):
        src_map[pos] = j
    out = []
    for g in keep:
        terms = []
        for exps, c in g.exponent_terms():
            terms.append((exps[tgt.n:], c))
        out.append(source_ring.from_terms(terms))
    check = _buchberger(tgt, list(target_ideal), budget) if target_ideal else None
    for g in out:
        img = g.substitute(images)
        if check is not None:
            img = check.normal_form(img)
        if img:
            raise InvariantViolation("kernel element does not vanish on the images")
    if not out:
        return empty_basis(source_ring)
    return _buchberger(source_ring, out, budget)
