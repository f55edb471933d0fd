"""Graded Ext against ``R``, transition maps between thickenings, and the
local-duality dictionary to sheaf cohomology.

``Ext^k_R(M, R)`` is the cohomology of ``Hom(F_., R)`` for the minimal
resolution ``F_.`` of ``M``; ``Hom(R(-a), R) = R(a)``.  Ranks in a single
internal degree ``j`` come either from the degree-``j`` strand of the dual
complex (exact sparse elimination) or, for the top index ``k = pd``, from a
Gröbner basis of the image of ``d_k^T``: there ``Ext^k`` is the cokernel and
its rank in degree ``j`` is a count of standard monomials.
"""

from __future__ import annotations

from collections import Counter
from math import comb

from ._engine import Basis, Budget
from .errors import InvalidInput, InvariantViolation, NotInImage, NotNested
from .linalg import Echelon, nullspace, rank
from .modules import GradedFreeModule, ModuleMap, TermOrder
from .resolution import HilbertSeries, module_hilbert_series


# above this many strand columns the module Gröbner route is cheaper
STRAND_LIMIT = 4000


class ExtCalculator:
    """Degreewise Ext of ``R/J`` (or a cokernel) from a fixed minimal resolution."""

    def __init__(self, res, budget=None):
        if budget is not None and not isinstance(budget, Budget):
            budget = Budget(budget)
        self.res = res
        self.ring = res.ring
        self.p = self.ring.field.p
        self.budget = budget
        self._basis = {}
        self._terms = {}
        self._coker = {}

    @property
    def pd(self):
        return self.res.length

    def hom_twists(self, k):
        """Generator degrees of ``Hom(F_k, R)``."""
        return [-a for a in self.res.twists(k)]

    def hom_dim(self, k, j):
        n = self.ring.n
        return sum(comb(j + a + n - 1, n - 1) for a in self.res.twists(k) if j + a >= 0)

    def hom_basis(self, k, j):
        """``([(slot, packed mono)], index)`` for ``Hom(F_k, R)_j``."""
        key = (k, j)
        if key not in self._basis:
            basis = GradedFreeModule(self.ring, [-a for a in self.res.twists(k)]).component_basis(j)
            self._basis[key] = (basis, {b: i for i, b in enumerate(basis)})
        return self._basis[key]

    def _transpose_terms(self, k):
        if k not in self._terms:
            self._terms[k] = self.res.transpose_terms(k)
        return self._terms[k]

    def dual_strand(self, k, j):
        """Rows of ``d_k^T : Hom(F_{k-1}, R)_j -> Hom(F_k, R)_j`` as sparse dicts."""
        if k < 1 or k > self.pd:
            return []
        src, _ = self.hom_basis(k - 1, j)
        _, tidx = self.hom_basis(k, j)
        terms = self._transpose_terms(k)
        mod = self.p
        rows = []
        for r, mu in src:
            row = {}
            for slot, tl in terms[r]:
                for m, c in tl:
                    i = tidx[(slot, mu + m)]
                    v = row.get(i, 0) + c
                    if mod:
                        v %= mod
                    row[i] = v
            rows.append({i: v for i, v in row.items() if v})
        return rows

    def strand_rank(self, k, j):
        return rank(self.dual_strand(k, j), self.p, self.budget)

    def ext_rank_strand(self, k, j):
        if k < 0 or k > self.pd:
            return 0
        dim = self.hom_dim(k, j)
        if dim == 0:
            return 0
        return dim - self.strand_rank(k + 1, j) - self.strand_rank(k, j)

    # cokernel presentations ---------------------------------------------
    def coker_basis(self, k):
        """Tracked-free Gröbner basis of ``im(d_k^T)`` inside ``Hom(F_k, R)``."""
        if k in self._coker:
            return self._coker[k]
        order = TermOrder.graded(self.ring, self.hom_twists(k))
        b = Basis(order, budget=self.budget)
        if 1 <= k <= self.pd:
            gens = []
            for parts in self._transpose_terms(k):
                vec = {}
                for c, tl in parts:
                    for m, v in tl:
                        vec[order.key(m, c)] = v
                if vec:
                    gens.append(vec)
            b.run(gens)
        self._coker[k] = b
        return b

    def coker_series(self, k):
        b = self.coker_basis(k)
        leads = [(ld[2], self.ring.unpack(ld[1])) for ld in b.lead]
        return module_hilbert_series(b.order, leads)

    def hom_series(self, k):
        n = self.ring.n
        return HilbertSeries(Counter(self.hom_twists(k)), n)

    def ext_series(self, k):
        """Hilbert series of ``Ext^k``: ``HS(coker d_k^T) + HS(coker d_{k+1}^T) - HS(Hom F_{k+1})``."""
        n = self.ring.n
        if k < 0 or k > self.pd:
            return HilbertSeries({}, n)
        total = self.coker_series(k)
        if k + 1 <= self.pd:
            total = total + self.coker_series(k + 1) - self.hom_series(k + 1)
        return total

    def standard_basis(self, k, j):
        """Standard monomials ``(slot, mono)`` of ``coker(d_k^T)`` in degree ``j``."""
        b = self.coker_basis(k)
        basis, _ = self.hom_basis(k, j)
        return [(s, m) for s, m in basis if b.find_reducer(m, s) is None]

    def ext_rank_top(self, k, j):
        if k != self.pd:
            raise InvalidInput("the cokernel shortcut only applies at the top index")
        return len(self.standard_basis(k, j))

    def ext_rank(self, k, j, method="auto"):
        if k < 0 or k > self.pd:
            return 0
        if method == "auto":
            if k == self.pd and k >= 1:
                method = "top"
            elif self.hom_dim(k, j) + self.hom_dim(k + 1, j) <= STRAND_LIMIT:
                method = "strand"
            else:
                method = "series"
        if method == "top":
            return self.ext_rank_top(k, j)
        if method == "series":
            return self.ext_series(k).coefficient(j)
        if method == "strand":
            return self.ext_rank_strand(k, j)
        raise InvalidInput(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# chain maps


class ChainMap:
    """A degree-zero chain map between two resolutions.

    ``components[i][l]`` is the image of the ``l``-th generator of the source
    ``F_i``, keyed in the Schreyer order of the target ``F_i``.
    """

    def __init__(self, source, target, components):
        self.source = source
        self.target = target
        self.components = components
        self._dual = {}

    def order(self, i):
        t = self.target
        return t.base if i == 0 else t.steps[i - 1].source

    def dual_terms(self, i):
        """Sparse ``phi_i`` by rows (target generators), as in :meth:`Resolution.transpose_terms`."""
        from .resolution import _vector_rows

        if i not in self._dual:
            if i >= len(self.components) or not self.target.twists(i):
                self._dual[i] = [[] for _ in self.target.twists(i)]
            else:
                self._dual[i] = _vector_rows(self.order(i), self.components[i])
        return self._dual[i]

    def matrix(self, i):
        """``phi_i`` as a :class:`ModuleMap` ``F_i(source) -> F_i(target)``."""
        src = self.source.module(i)
        tgt = self.target.module(i)
        if i >= len(self.components) or tgt.rank == 0:
            return ModuleMap.from_columns(src, tgt, [{} for _ in range(src.rank)], check=False)
        o = self.order(i)
        cols = [o.to_columns(v) for v in self.components[i]]
        return ModuleMap.from_columns(src, tgt, cols)

    def check(self):
        """``d o phi = phi o d`` in every homological degree."""
        for i in range(1, self.source.length + 1):
            if i > self.target.length:
                lhs_zero = self.matrix(i - 1).compose(self.source.differential(i))
                if not lhs_zero.is_zero():
                    raise InvariantViolation(f"chain map fails to commute at {i}")
                continue
            left = self.target.differential(i).compose(self.matrix(i))
            right = self.matrix(i - 1).compose(self.source.differential(i))
            if left != right:
                raise InvariantViolation(f"chain map fails to commute at {i}")
        return True

    def compose(self, other):
        """``self o other`` (``other`` maps into this map's source)."""
        comps = []
        for i in range(min(len(self.components), len(other.components))):
            if i > self.target.length or i > self.source.length:
                comps.append([{} for _ in other.components[i]])
                continue
            so = self.source.base if i == 0 else self.source.steps[i - 1].source
            to = self.order(i)
            mod = self.target.ring.field.p
            out = []
            for vec in other.components[i]:
                acc = {}
                for k, c in vec.items():
                    m, s = so.decode(k)
                    sh = to.shift(m)
                    for kk, cc in self.components[i][s].items():
                        v = acc.get(kk + sh, 0) + c * cc
                        if mod:
                            v %= mod
                        if v:
                            acc[kk + sh] = v
                        else:
                            acc.pop(kk + sh, None)
                out.append(acc)
            comps.append(out)
        return ChainMap(other.source, self.target, comps)


def _apply(vec, src_order, dst_order, images, mod):
    """Image of ``vec`` (keyed in ``src_order``) under generator images keyed in ``dst_order``."""
    acc = {}
    for k, c in vec.items():
        m, s = src_order.decode(k)
        sh = dst_order.shift(m)
        for kk, cc in images[s].items():
            key = kk + sh
            v = acc.get(key, 0) + c * cc
            if mod:
                v %= mod
            if v:
                acc[key] = v
            else:
                acc.pop(key, None)
    return acc


def lift_surjection_chain_map(big, small, res_big=None, res_small=None):
    """Chain map over ``R/big -> R/small`` between minimal resolutions (needs ``big ⊆ small``)."""
    from .resolution import free_resolution

    if not big.is_subset_of(small):
        raise NotNested("the larger ideal is not contained in the smaller one")
    res_big = res_big or free_resolution(big)
    res_small = res_small or free_resolution(small)
    return lift_chain_map(res_big, res_small)


def lift_chain_map(res_big, res_small):
    """Lift the identity of ``R`` to a chain map ``res_big -> res_small``."""
    ring = res_big.ring
    mod = ring.field.p
    one = ring.field.one
    comps = [[{res_small.base.key(0, 0): one}]]
    for i in range(1, res_big.length + 1):
        sb = res_big.steps[i - 1]
        prev = comps[-1]
        if i > res_small.length:
            if i - 1 <= res_small.length:
                for col in sb.columns:
                    if _apply(col, sb.target, _order_of(res_small, i - 1), prev, mod):
                        raise InvariantViolation("chain map does not vanish past the target length")
            comps.append([{} for _ in sb.columns])
            continue
        ss = res_small.steps[i - 1]
        out = []
        for col in sb.columns:
            v = _apply(col, sb.target, ss.target, prev, mod)
            try:
                out.append(ss.lift(v) if v else {})
            except NotInImage:
                if i == 1:
                    raise NotNested("a generator of the larger ideal is not in the smaller one") from None
                raise InvariantViolation(f"cannot lift chain map at homological degree {i}") from None
        comps.append(out)
    return ChainMap(res_big, res_small, comps)


def _order_of(res, i):
    return res.base if i == 0 else res.steps[i - 1].source


# ---------------------------------------------------------------------------
# induced maps on Ext


def _image_in_big(chain, k, basis_small, order, combo, p):
    """``phi_k^T`` of a combination of ``Hom(F_k(small))_j`` basis vectors, keyed in ``order``."""
    terms = chain.dual_terms(k)
    vec = {}
    for idx, a in combo.items():
        l, mu = basis_small[idx]
        for slot, tl in terms[l]:
            for m, c in tl:
                key = order.key(mu + m, slot)
                v = vec.get(key, 0) + a * c
                if p:
                    v %= p
                vec[key] = v
    return {kk: v for kk, v in vec.items() if v}


def _representatives(calc, k, basis, cycles, want):
    """Cycles whose classes form a basis of ``Ext^k_j`` (independent modulo boundaries)."""
    b = calc.coker_basis(k)
    order = b.order
    e = Echelon(calc.p)
    out = []
    for z in cycles:
        vec = {order.key(basis[i][1], basis[i][0]): c for i, c in z.items()}
        vec = b.full_reduce(vec)
        if vec and e.add(vec):
            out.append(z)
            if len(out) == want:
                break
    return out


def induced_map_rank(chain, calc_small, calc_big, k, j):
    """``(rank Ext^k(small)_j, rank Ext^k(big)_j, rank of the induced map)``.

    Cycles of the small dual complex are pushed forward by ``phi_k^T`` and
    reduced modulo a Gröbner basis of the boundaries ``im(d_k^T)`` of the big
    one; normal forms are linear, so their rank is the rank of the map.
    """
    s = calc_small.ext_rank(k, j)
    t = calc_big.ext_rank(k, j)
    if s == 0 or t == 0:
        return s, t, 0
    p = calc_big.p
    if k == calc_small.pd:
        basis_small = calc_small.hom_basis(k, j)[0]
        index = calc_small.hom_basis(k, j)[1]
        # standard monomials of the small cokernel represent all of Ext^k
        cycles = [{index[b]: 1} for b in calc_small.standard_basis(k, j)]
    else:
        basis_small = calc_small.hom_basis(k, j)[0]
        cycles = _representatives(calc_small, k, basis_small, nullspace(calc_small.dual_strand(k + 1, j), p, calc_small.budget), s)
    b = calc_big.coker_basis(k)
    e = Echelon(p)
    for z in cycles:
        vec = _image_in_big(chain, k, basis_small, b.order, z, p)
        if vec:
            vec = b.full_reduce(vec)
            if vec:
                e.add(vec)
    return s, t, e.rank


# ---------------------------------------------------------------------------
# duality dictionary and limits


def sheaf_from_ext(n, k, m, ext, quotient_dim):
    """``rank H^k(X, O(m))`` given ``ext(kappa, j)`` and ``dim (R/J)_m``."""
    j = -n - 1 - m
    if k >= 1:
        return ext(n - k, j)
    return quotient_dim(m) - ext(n + 1, j) + ext(n, j)


def limit_rank_oracle(mu, n, k, j):
    """Degree-``j`` rank of ``H^{n+1}_m(R)^{mu}``: ``mu * C(-j-1, n)`` for ``j <= -n-1``.

    ``k`` names the Ext index of the column being compared and does not
    enter the value.
    """
    if not isinstance(mu, int) or mu <= 0:
        raise InvalidInput("mu must be a positive integer")
    if j > -n - 1:
        return 0
    return mu * comb(-j - 1, n)


# ---------------------------------------------------------------------------
# one-shot entry points and the tower of thickenings


def ext_rank(J, k, j, budget=None):
    """``dim Ext^k_R(R/J, R)_j``."""
    from .resolution import free_resolution

    if k < 0 or k > J.ring.n:
        return 0
    return ExtCalculator(free_resolution(J, budget), budget).ext_rank(k, j)


class Thickenings:
    """Powers ``I^t`` of one ideal with their resolutions and transition chain maps.

    Everything is built on first use and kept, so a table over many ``(t, j)``
    cells resolves each power once.
    """

    def __init__(self, ideal, budget=None):
        if budget is not None and not isinstance(budget, Budget):
            budget = Budget(budget)
        self.ideal = ideal
        self.ring = ideal.ring
        self.budget = budget
        self._power = {}
        self._res = {}
        self._calc = {}
        self._chain = {}

    @property
    def n(self):
        return self.ring.n - 1

    def power(self, t):
        from .ideals import ideal_power

        if t not in self._power:
            self._power[t] = self.ideal if t == 1 else ideal_power(self.ideal, t)
        return self._power[t]

    def resolution(self, t):
        from .resolution import free_resolution

        if t not in self._res:
            self._res[t] = free_resolution(self.power(t), self.budget)
        return self._res[t]

    def calculator(self, t):
        if t not in self._calc:
            self._calc[t] = ExtCalculator(self.resolution(t), self.budget)
        return self._calc[t]

    def chain(self, t, t2=None):
        """Chain map ``F(I^{t2}) -> F(I^t)`` over the surjection (``t2`` defaults to ``t + 1``)."""
        t2 = t + 1 if t2 is None else t2
        if t2 < t:
            raise InvalidInput("need t2 >= t")
        if (t, t2) not in self._chain:
            if t2 == t:
                res = self.resolution(t)
                ch = lift_chain_map(res, res)
            elif t2 == t + 1:
                ch = lift_chain_map(self.resolution(t2), self.resolution(t))
            else:
                ch = self.chain(t, t2 - 1).compose(self.chain(t2 - 1, t2))
            self._chain[(t, t2)] = ch
        return self._chain[(t, t2)]

    def ext_rank(self, k, t, j):
        if k < 0 or k > self.ring.n:
            return 0
        return self.calculator(t).ext_rank(k, j)

    def transition(self, k, t, j, t2=None):
        """``(source, target, map rank)`` for ``Ext^k(R/I^t)_j -> Ext^k(R/I^{t2})_j``."""
        t2 = t + 1 if t2 is None else t2
        s = self.ext_rank(k, t, j)
        if s == 0:
            return 0, self.ext_rank(k, t2, j), 0
        return induced_map_rank(self.chain(t, t2), self.calculator(t), self.calculator(t2), k, j)

    def quotient_dim(self, t, m):
        """``dim (R/I^t)_m``."""
        return self.resolution(t).euler_characteristic(m)

    def sheaf_rank(self, k, t, m):
        """``rank H^k(X_t, O(m))`` through graded local duality."""
        if k < 0:
            return 0
        return sheaf_from_ext(
            self.n, k, m, lambda kk, j: self.ext_rank(kk, t, j), lambda d: self.quotient_dim(t, d)
        )


def transition_map_rank(I, k, t, j, budget=None):
    """``(source, target, map rank)`` of ``Ext^k(R/I^t, R)_j -> Ext^k(R/I^{t+1}, R)_j``."""
    if t < 1:
        raise InvalidInput("t must be at least 1")
    return Thickenings(I, budget).transition(k, t, j)


def sheaf_cohomology_rank(I, k, t, m, budget=None):
    """``rank H^k(X_t, O_{X_t}(m))`` for ``X_t = Proj R/I^t``."""
    if t < 1 or k < 0:
        raise InvalidInput("need t >= 1 and k >= 0")
    return Thickenings(I, budget).sheaf_rank(k, t, m)
