"""Homogeneous Buchberger algorithm on vectors of a free module.

Vectors are dicts keyed by :class:`~thickenings.modules.TermOrder` keys.  The
engine optionally carries a *tracking block*: slots ``>= track_from`` hold the
coefficients expressing each basis element in terms of the input generators.
With the target block dominating, a vector whose leading term lies in the
tracking block is a syzygy of the inputs.  Processing goes strictly by degree;
within a degree, pairs between syzygies come first, then the remaining pairs,
then input generators.  Under that schedule an input that survives reduction
is a minimal generator, and a syzygy produced by a non-syzygy pair or an input
that survives reduction is a minimal syzygy.
"""

from __future__ import annotations

import heapq
import time

from .errors import BudgetExceeded, NotInImage


class Budget:
    """Wall-clock limit shared by a computation."""

    def __init__(self, max_seconds=None):
        self.max_seconds = max_seconds
        self.deadline = None if max_seconds is None else time.monotonic() + max_seconds

    def check(self, where=None):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded(f"time budget of {self.max_seconds}s exceeded", where)


NO_BUDGET = Budget()


class Basis:
    """A (partial) Gröbner basis under construction."""

    def __init__(self, order, track_from=None, product_criterion=None, budget=None, max_degree=None):
        self.order = order
        self.ring = order.ring
        self.mod = self.ring.field.p
        self.track_from = track_from
        if product_criterion is None:
            product_criterion = track_from is None and order.rank == 1
        self.product_criterion = product_criterion
        self.budget = budget or NO_BUDGET
        self.max_degree = max_degree
        self.elems = []
        self.lead = []  # (key, mono, slot, degree)
        self.reducers = {}
        self._pairs = []
        self._pairs_by_slot = {}
        self.minimal_inputs = []
        self.min_syz = []
        self.reductions = 0
        self.complete_through = None

    # helpers -------------------------------------------------------------
    def _is_track(self, slot):
        return self.track_from is not None and slot >= self.track_from

    def find_reducer(self, m, slot):
        lst = self.reducers.get(slot)
        if lst:
            g = self.ring.guards
            for lm, idx in lst:
                if (((m | g) - lm) & g) == g:
                    return lm, idx
        return None

    def top_reduce(self, f):
        """Top-reduce ``f`` in place; returns the leading key (or ``None``)."""
        if not f:
            return None
        order = self.order
        decode = order.decode
        shift = order.shift
        mod = self.mod
        elems = self.elems
        heap = [-k for k in f]
        heapq.heapify(heap)
        push = heapq.heappush
        pop = heapq.heappop
        while heap:
            k = -heap[0]
            c = f.get(k)
            if c is None:
                pop(heap)
                continue
            m, slot = decode(k)
            red = self.find_reducer(m, slot)
            if red is None:
                return k
            lm, idx = red
            sh = shift(m - lm)
            self.reductions += 1
            for kg, cg in elems[idx].items():
                kk = kg + sh
                v = f.get(kk)
                if v is None:
                    v = -c * cg
                    if mod:
                        v %= mod
                    f[kk] = v
                    push(heap, -kk)
                else:
                    v -= c * cg
                    if mod:
                        v %= mod
                    if v:
                        f[kk] = v
                    else:
                        del f[kk]
        return None

    def full_reduce(self, f, stop_at_track=False):
        """Normal form of ``f``; with ``stop_at_track`` reduction halts at the tracking block."""
        order = self.order
        decode = order.decode
        shift = order.shift
        mod = self.mod
        elems = self.elems
        f = dict(f)
        rem = {}
        heap = [-k for k in f]
        heapq.heapify(heap)
        push = heapq.heappush
        pop = heapq.heappop
        while heap:
            k = -pop(heap)
            c = f.get(k)
            if c is None:
                continue
            m, slot = decode(k)
            if stop_at_track and self._is_track(slot):
                rem[k] = c
                del f[k]
                continue
            red = self.find_reducer(m, slot)
            if red is None:
                rem[k] = c
                del f[k]
                continue
            lm, idx = red
            sh = shift(m - lm)
            del f[k]
            g = elems[idx]
            for kg, cg in g.items():
                kk = kg + sh
                if kk == k:
                    continue
                v = f.get(kk)
                if v is None:
                    v = -c * cg
                    if mod:
                        v %= mod
                    f[kk] = v
                    push(heap, -kk)
                else:
                    v -= c * cg
                    if mod:
                        v %= mod
                    if v:
                        f[kk] = v
                    else:
                        del f[kk]
        return rem

    def _monic(self, f, k):
        c = f[k]
        if c == 1:
            return f
        inv = self.ring.field.inv(c)
        mod = self.mod
        if mod:
            return {kk: v * inv % mod for kk, v in f.items()}
        return {kk: v * inv for kk, v in f.items()}

    def _add(self, f, k):
        f = self._monic(f, k)
        m, slot = self.order.decode(k)
        deg = self.ring.mono_degree(m) + self.order.twists[slot]
        t = len(self.elems)
        self.elems.append(f)
        self.lead.append((k, m, slot, deg))
        self._update_pairs(t, m, slot)
        self.reducers.setdefault(slot, []).append((m, t))
        return t

    def _update_pairs(self, t, mt, slot):
        ring = self.ring
        same = [i for _, i in self.reducers.get(slot, [])]
        if not same:
            return
        divides = ring.divides
        lcm = ring.lcm
        lead = self.lead
        # chain criterion on existing pairs
        bucket = self._pairs_by_slot.get(slot, [])
        if bucket:
            keep = []
            for rec in bucket:
                if not rec[6]:
                    continue
                L = rec[5]
                if divides(mt, L):
                    li = lcm(lead[rec[3]][1], mt)
                    lj = lcm(lead[rec[4]][1], mt)
                    if li != L and lj != L:
                        rec[6] = False
                        continue
                keep.append(rec)
            self._pairs_by_slot[slot] = keep
        cand = []
        for i in same:
            mi = lead[i][1]
            L = lcm(mi, mt)
            cand.append((L, i, L == mi + mt))
        # criterion M: drop pairs whose lcm is strictly divisible by another new lcm
        lcms = {L for L, _, _ in cand}
        minimal = {L for L in lcms if not any(L2 != L and divides(L2, L) for L2 in lcms)}
        groups = {}
        for L, i, coprime in cand:
            if L in minimal:
                groups.setdefault(L, []).append((i, coprime))
        order = self.order
        twist = order.twists[slot]
        cls = 0 if self._is_track(slot) else 1
        for L, members in groups.items():
            if self.product_criterion and any(cp for _, cp in members):
                continue
            i = members[0][0]
            deg = ring.mono_degree(L) + twist
            rec = [deg, cls, order.key(L, slot), i, t, L, True]
            self._pairs_by_slot.setdefault(slot, []).append(rec)
            heapq.heappush(self._pairs, (deg, cls, rec[2], i, t, id(rec), rec))

    def _spoly(self, i, j, L):
        shift = self.order.shift
        mi = self.lead[i][1]
        mj = self.lead[j][1]
        si = shift(L - mi)
        sj = shift(L - mj)
        f = {k + si: c for k, c in self.elems[i].items()}
        mod = self.mod
        for k, c in self.elems[j].items():
            kk = k + sj
            v = f.get(kk, 0) - c
            if mod:
                v %= mod
            if v:
                f[kk] = v
            else:
                f.pop(kk, None)
        return f

    # main loop -----------------------------------------------------------
    def run(self, gens, degrees=None):
        """Add homogeneous generators and complete the basis."""
        order = self.order
        if degrees is None:
            degrees = [order.vector_degree(g) for g in gens]
        pending = sorted(
            (d, n) for n, (g, d) in enumerate(zip(gens, degrees)) if g and d is not None
        )
        pending.reverse()
        heap = self._pairs
        while heap or pending:
            d_pair = heap[0][0] if heap else None
            d_in = pending[-1][0] if pending else None
            d = d_pair if d_in is None or (d_pair is not None and d_pair <= d_in) else d_in
            if self.max_degree is not None and d > self.max_degree:
                break
            while heap and heap[0][0] == d:
                rec = heapq.heappop(heap)[-1]
                if not rec[6]:
                    continue
                rec[6] = False
                self.budget.check(("pair", d))
                f = self._spoly(rec[3], rec[4], rec[5])
                k = self.top_reduce(f)
                if k is None:
                    continue
                t = self._add(f, k)
                if rec[1] == 1 and self._is_track(self.lead[t][2]):
                    self.min_syz.append(t)
            while pending and pending[-1][0] == d:
                _, n = pending.pop()
                self.budget.check(("input", d))
                f = dict(gens[n])
                k = self.top_reduce(f)
                if k is None:
                    continue
                t = self._add(f, k)
                if self._is_track(self.lead[t][2]):
                    self.min_syz.append(t)
                else:
                    self.minimal_inputs.append(n)
            self.complete_through = d
        if not heap and not pending:
            self.complete_through = float("inf")
        return self

    # queries ---------------------------------------------------------------
    def lift(self, vec):
        """Express ``vec`` (target block) in the inputs; returns the tracking part."""
        f = dict(vec)
        k = self.top_reduce(f)
        if k is not None and not self._is_track(self.order.slot(k)):
            raise NotInImage("vector is not in the submodule")
        mod = self.mod
        if mod:
            return {kk: (-c) % mod for kk, c in f.items()}
        return {kk: -c for kk, c in f.items()}

    def target_elements(self):
        return [i for i, ld in enumerate(self.lead) if not self._is_track(ld[2])]

    def interreduced(self):
        """Reduced basis (target block only when tracking): list of monic vectors."""
        idx = [i for i in self.target_elements()]
        idx.sort(key=lambda i: self.lead[i][0])
        keep = []
        for i in idx:
            m, slot = self.lead[i][1], self.lead[i][2]
            if any(self.lead[j][2] == slot and self.ring.divides(self.lead[j][1], m) for j in keep):
                continue
            keep.append(i)
        sub = Basis(self.order, None, False)
        for i in keep:
            vec = self.elems[i]
            if self.track_from is not None:
                vec = {k: c for k, c in vec.items() if not self._is_track(self.order.slot(k))}
            sub.elems.append(vec)
            sub.lead.append(self.lead[i])
            sub.reducers.setdefault(self.lead[i][2], []).append((self.lead[i][1], len(sub.elems) - 1))
        out = []
        for pos, vec in enumerate(sub.elems):
            k = sub.lead[pos][0]
            # reduce tails against the other elements only
            saved = sub.reducers[sub.lead[pos][2]]
            sub.reducers[sub.lead[pos][2]] = [rd for rd in saved if rd[1] != pos]
            tail = {kk: c for kk, c in vec.items() if kk != k}
            red = sub.full_reduce(tail)
            sub.reducers[sub.lead[pos][2]] = saved
            red[k] = vec[k]
            out.append(red)
        for pos, vec in enumerate(out):
            sub.elems[pos] = vec
        return sorted(out, key=lambda v: -max(v))
