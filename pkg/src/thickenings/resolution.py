"""Minimal graded free resolutions, Betti tables and Hilbert series."""

from __future__ import annotations

import json
from collections import Counter
from functools import lru_cache
from math import comb

from ._engine import Basis, Budget
from ._resolve import resolve_columns
from .errors import InvalidInput, InvariantViolation
from .groebner import _ring_order
from .ideals import GradedIdeal
from .modules import GradedFreeModule, ModuleMap, TermOrder


class Resolution:
    """A graded free resolution ``0 <- F_0 <- F_1 <- ... <- F_p <- 0``.

    ``maps[i]`` is ``d_{i+1} : F_{i+1} -> F_i``.  Resolutions produced by
    :func:`free_resolution` also keep the Schreyer data used to lift chain
    maps (``steps``).
    """

    def __init__(self, ring, maps, minimal=False, steps=None, base=None):
        self.ring = ring
        self._maps = maps
        self.minimal = minimal
        self.steps = steps
        self.base = base
        if maps is None and steps is None:
            raise InvalidInput("need maps or steps")

    @classmethod
    def from_steps(cls, ring, base, steps):
        return cls(ring, None, minimal=True, steps=steps, base=base)

    @property
    def maps(self):
        if self._maps is None:
            out = []
            for st in self.steps:
                src = GradedFreeModule(self.ring, st.source.twists)
                tgt = GradedFreeModule(self.ring, st.target.twists)
                cols = [st.target.to_columns(v) for v in st.columns]
                out.append(ModuleMap.from_columns(src, tgt, cols, check=False))
            self._maps = out
        return self._maps

    @property
    def length(self):
        """Projective dimension of the resolved module (index of the last nonzero term)."""
        if self.steps is not None:
            return len(self.steps)
        return len(self._maps)

    pd = length

    def twists(self, i):
        """Twists of ``F_i`` (empty beyond the length)."""
        if i < 0:
            return []
        if self.steps is not None:
            if i == 0:
                return list(self.base.twists)
            if i > len(self.steps):
                return []
            return list(self.steps[i - 1].source.twists)
        if i == 0:
            return list(self._maps[0].target.twists) if self._maps else list(self.base.twists)
        if i > len(self._maps):
            return []
        return list(self._maps[i - 1].source.twists)

    def module(self, i):
        return GradedFreeModule(self.ring, self.twists(i))

    def ranks(self):
        return [len(self.twists(i)) for i in range(self.length + 1)]

    def betti(self):
        return BettiTable({(i, a): c for i in range(self.length + 1) for a, c in Counter(self.twists(i)).items()})

    def differential(self, i):
        """``d_i : F_i -> F_{i-1}`` for ``1 <= i <= length``."""
        return self.maps[i - 1]

    def check_complex(self):
        """``d_i o d_{i+1} = 0`` for every ``i`` (raises on failure)."""
        maps = self.maps
        for i in range(len(maps) - 1):
            if not maps[i].compose(maps[i + 1]).is_zero():
                raise InvariantViolation(f"d_{i + 1} o d_{i + 2} is not zero")
        return True

    def has_unit_entries(self):
        if self.steps is not None and self._maps is None:
            for st in self.steps:
                for vec in st.columns:
                    # a constant entry has a term whose monomial is 1
                    if any(st.target.decode(k)[0] == 0 for k in vec):
                        return True
            return False
        return any(p and p.is_constant() for d in self.maps for row in d.entries for p in row)

    def transpose_terms(self, k):
        """Sparse ``d_k`` by rows: ``rows[r] = [(column, [(packed mono, coeff)])]``."""
        if self.steps is None:
            A = self.differential(k)
            ring = self.ring
            out = []
            for row in A.entries:
                out.append([(c, [(ring.mono(kk), v) for kk, v in p._t.items()]) for c, p in enumerate(row) if p])
            return out
        st = self.steps[k - 1]
        return _vector_rows(st.target, st.columns)

    def euler_characteristic(self, d):
        """``sum_i (-1)^i dim (F_i)_d``."""
        n = self.ring.n
        return sum(
            (-1) ** i * sum(comb(d - a + n - 1, n - 1) for a in self.twists(i) if d >= a)
            for i in range(self.length + 1)
        )

    def hilbert_series(self):
        """Series of the resolved module from the Betti numbers."""
        num = Counter()
        for i in range(self.length + 1):
            for a in self.twists(i):
                num[a] += (-1) ** i
        return HilbertSeries(num, self.ring.n)

    def exactness_window(self):
        top = max((max(self.twists(i), default=0) for i in range(self.length + 1)), default=0)
        return top + self.ring.n + 1

    def check_exact(self, degrees=None, p=None):
        """Degreewise rank check: ``rank d_i + rank d_{i+1} = dim F_i`` at each ``i >= 1``."""
        from .linalg import rank

        if degrees is None:
            degrees = range(0, self.exactness_window() + 1)
        if p is None:
            p = self.ring.field.p
        for d in degrees:
            ranks = [0]
            for i in range(1, self.length + 1):
                ranks.append(rank(_degree_matrix(self.maps[i - 1], d), p))
            ranks.append(0)
            for i in range(1, self.length + 1):
                dim = self.module(i).component_dim(d)
                if ranks[i] + ranks[i + 1] != dim:
                    raise InvariantViolation(f"resolution not exact at F_{i} in degree {d}")
        return True


def _vector_rows(order, columns):
    """Rows of the matrix whose ``l``-th column is the vector ``columns[l]``."""
    rows = [dict() for _ in range(order.rank)]
    for l, vec in enumerate(columns):
        for k, c in vec.items():
            m, r = order.decode(k)
            rows[r].setdefault(l, []).append((m, c))
    return [sorted(r.items()) for r in rows]


def _degree_matrix(A, d):
    """Rows: basis of ``(source)_d``; row vector = image in ``(target)_d``."""
    ring = A.ring
    tgt_index = {bm: i for i, bm in enumerate(A.target.component_basis(d))}
    rows = []
    for c, a in enumerate(A.source.twists):
        if d < a:
            continue
        col = A.column(c)
        for mu in ring.monomials_of_degree(d - a):
            row = {}
            for r, poly in col.items():
                for k, coef in poly._t.items():
                    idx = tgt_index[(r, mu + ring.mono(k))]
                    row[idx] = row.get(idx, 0) + coef
            rows.append({k: v for k, v in row.items() if v})
    return rows


def _ideal_vectors(J):
    o = _ring_order(J.ring)
    return o, [{o.key(J.ring.mono(k), 0): c for k, c in g._t.items()} for g in J.generators]


def free_resolution(J, budget=None, max_length=None):
    """Minimal free resolution of ``R/J`` (or of the cokernel of a :class:`ModuleMap`)."""
    budget = budget if isinstance(budget, Budget) else Budget(budget)
    if isinstance(J, GradedIdeal):
        ring = J.ring
        base, vecs = _ideal_vectors(J)
    elif isinstance(J, ModuleMap):
        ring = J.ring
        base = TermOrder.graded(ring, J.target.twists)
        vecs = [base.from_columns(c) for c in J.columns()]
    else:
        raise InvalidInput("expected a GradedIdeal or a ModuleMap")
    vecs = [v for v in vecs if v]
    b = Basis(base, budget=budget)
    b.run(vecs)
    keep = sorted(b.minimal_inputs)
    cols = [vecs[i] for i in keep]
    steps = resolve_columns(base, cols, [base.vector_degree(c) for c in cols], budget, max_length)
    res = Resolution.from_steps(ring, base, steps)
    res.gb_size = len(b.elems)
    if res.has_unit_entries():
        raise InvariantViolation("Schreyer steps produced a non-minimal resolution")
    return res


def minimalize(res):
    """Cancel unit entries of the differentials; returns a minimal resolution."""
    maps = [ModuleMap(d.source, d.target, [list(r) for r in d.entries], check=False) for d in res.maps]
    ring = res.ring
    field = ring.field
    changed = True
    while changed:
        changed = False
        for i, A in enumerate(maps):
            hit = None
            for r, row in enumerate(A.entries):
                for c, p in enumerate(row):
                    if p and p.is_constant():
                        hit = (r, c)
                        break
                if hit:
                    break
            if hit is None:
                continue
            r, c = hit
            a_inv = field.inv(A.entries[r][c].leading_coefficient())
            alpha = [A.entries[s][c] for s in range(A.target.rank)]
            beta = A.entries[r]
            new_rows = []
            for s in range(A.target.rank):
                if s == r:
                    continue
                row = []
                for k in range(A.source.rank):
                    if k == c:
                        continue
                    e = A.entries[s][k]
                    if alpha[s] and beta[k]:
                        e = e - (alpha[s] * beta[k]).scale(a_inv)
                    row.append(e)
                new_rows.append(row)
            src = GradedFreeModule(ring, [t for k, t in enumerate(A.source.twists) if k != c])
            tgt = GradedFreeModule(ring, [t for s, t in enumerate(A.target.twists) if s != r])
            maps[i] = ModuleMap(src, tgt, new_rows, check=False)
            if i + 1 < len(maps):
                B = maps[i + 1]
                rows = [row for s, row in enumerate(B.entries) if s != c]
                maps[i + 1] = ModuleMap(B.source, src, rows, check=False)
            if i > 0:
                C = maps[i - 1]
                rows = [[p for k, p in enumerate(row) if k != r] for row in C.entries]
                maps[i - 1] = ModuleMap(tgt, C.target, rows, check=False)
            changed = True
            break
    while maps and maps[-1].source.rank == 0:
        maps.pop()
    base = TermOrder.graded(ring, list(maps[0].target.twists)) if maps else res.base
    out = Resolution(ring, maps, minimal=True, base=base)
    return out


class BettiTable:
    """Graded Betti numbers ``beta_{i,d}``."""

    def __init__(self, entries):
        self.entries = {k: v for k, v in entries.items() if v}

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def totals(self):
        top = max((i for i, _ in self.entries), default=-1)
        return [sum(v for (i, _), v in self.entries.items() if i == h) for h in range(top + 1)]

    def to_text(self):
        """Macaulay-style grid: column ``i``, row ``d - i``."""
        if not self.entries:
            return "total:\n"
        hs = sorted({i for i, _ in self.entries})
        rows = sorted({d - i for i, d in self.entries})
        width = max(len(str(v)) for v in list(self.entries.values()) + self.totals()) + 1
        lines = ["total: " + " ".join(str(v).rjust(width) for v in self.totals())]
        for r in rows:
            cells = []
            for i in range(max(hs) + 1):
                v = self.entries.get((i, r + i), 0)
                cells.append((str(v) if v else ".").rjust(width))
            lines.append(f"{r:>5}: " + " ".join(cells))
        return "\n".join(lines)

    def to_json(self):
        return json.dumps(
            {"betti": [{"i": i, "d": d, "value": v} for (i, d), v in sorted(self.entries.items())]},
            sort_keys=True,
        )


# ---------------------------------------------------------------------------
# Hilbert series


class HilbertSeries:
    """``numerator(z) / (1 - z)^nvars`` with a Laurent numerator."""

    def __init__(self, numerator, nvars):
        self.numerator = {int(k): int(v) for k, v in dict(numerator).items() if v}
        self.nvars = nvars

    def coefficient(self, d):
        N = self.nvars
        return sum(c * comb(d - a + N - 1, N - 1) for a, c in self.numerator.items() if d >= a)

    def __getitem__(self, d):
        return self.coefficient(d)

    def __eq__(self, other):
        return isinstance(other, HilbertSeries) and self.numerator == other.numerator and self.nvars == other.nvars

    def __add__(self, other):
        return HilbertSeries(_sub(self.numerator, {k: -v for k, v in other.numerator.items()}), self.nvars)

    def __sub__(self, other):
        return HilbertSeries(_sub(self.numerator, other.numerator), self.nvars)

    def shift(self, s):
        """Series of ``M(s)`` (degrees lowered by ``s``)."""
        return HilbertSeries({a - s: c for a, c in self.numerator.items()}, self.nvars)

    def reduced(self):
        """``(num, dim)`` with ``num(1) != 0`` and series ``num / (1 - z)^dim``."""
        num = dict(self.numerator)
        dim = self.nvars
        while num and dim > 0 and sum(num.values()) == 0:
            # divide by (1 - z)
            lo, hi = min(num), max(num)
            q = {}
            acc = 0
            for a in range(lo, hi):
                acc += num.get(a, 0)
                if acc:
                    q[a] = acc
            num = q
            dim -= 1
        return num, dim

    @property
    def dimension(self):
        if not self.numerator:
            return -1
        return self.reduced()[1]

    @classmethod
    def from_rational(cls, num, den_power, nvars):
        """Rewrite ``num / (1 - z)^den_power`` with denominator ``(1 - z)^nvars``."""
        if den_power > nvars:
            raise InvalidInput("denominator exponent too large")
        out = Counter(num)
        for _ in range(nvars - den_power):
            nxt = Counter()
            for a, c in out.items():
                nxt[a] += c
                nxt[a + 1] -= c
            out = nxt
        return cls(out, nvars)

    def to_str(self):
        num, dim = self.reduced()
        terms = []
        for a in sorted(num):
            c = num[a]
            z = "1" if a == 0 else ("z" if a == 1 else f"z^{a}")
            if a == 0:
                body = str(abs(c))
            elif abs(c) == 1:
                body = z
            else:
                body = f"{abs(c)}*{z}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for s, b in terms[1:]:
            text += f" {s} {b}"
        return f"({text})/(1-z)^{dim}"

    def __repr__(self):
        return f"HilbertSeries({self.to_str()})"


def _sub(a, b):
    out = Counter(a)
    for k, v in b.items():
        out[k] -= v
    return {k: v for k, v in out.items() if v}


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _minimize_monomials(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return out


@lru_cache(maxsize=None)
def _numerator(gens):
    """Numerator of the Hilbert series of ``R/(gens)`` over the full ring."""
    gens = list(gens)
    if not gens:
        return ((0, 1),)
    support = [tuple(i for i, e in enumerate(g) if e) for g in gens]
    used = Counter(i for s in support for i in s)
    if all(c == 1 for c in used.values()):
        # pairwise coprime: product of (1 - z^deg)
        poly = Counter({0: 1})
        for g in gens:
            d = sum(g)
            nxt = Counter()
            for a, c in poly.items():
                nxt[a] += c
                nxt[a + d] -= c
            poly = nxt
        return tuple(sorted((a, c) for a, c in poly.items() if c))
    # pivot on a variable of a generator that is not a pure power
    mixed = [g for g, sup in zip(gens, support) if len(sup) > 1]
    mused = Counter(i for g in mixed for i, e in enumerate(g) if e)
    var = max(mused, key=lambda i: (mused[i], -i))
    exps = sorted(g[var] for g in mixed if g[var])
    e = exps[len(exps) // 2]
    pivot = tuple(e if i == var else 0 for i in range(len(gens[0])))
    plus = _minimize_monomials(gens + [pivot])
    colon = _minimize_monomials([tuple(max(x - y, 0) for x, y in zip(g, pivot)) for g in gens])
    out = Counter(dict(_numerator(tuple(plus))))
    for a, c in _numerator(tuple(colon)):
        out[a + e] += c
    return tuple(sorted((a, c) for a, c in out.items() if c))


def monomial_hilbert_numerator(gens):
    """Numerator of ``HS(R/M)`` for a monomial ideal given by exponent tuples."""
    return dict(_numerator(tuple(_minimize_monomials([tuple(g) for g in gens]))))


def hilbert_series(J):
    """Hilbert series of ``R/J`` from the leading-term ideal of a Gröbner basis."""
    if isinstance(J, GradedIdeal):
        lts = [m.exponents for m in J.gb().leading_monomials()]
        return HilbertSeries(monomial_hilbert_numerator(lts), J.ring.n)
    raise InvalidInput("expected a GradedIdeal")


def hilbert_function(J, d):
    """``dim_F (R/J)_d``."""
    if d < 0:
        return 0
    return hilbert_series(J).coefficient(d)


def module_hilbert_series(order, lead_pairs):
    """Series of ``F / LT`` where ``F`` has the order's twists and ``lead_pairs`` are ``(slot, exponents)``."""
    per_slot = {}
    for s, e in lead_pairs:
        per_slot.setdefault(s, []).append(e)
    num = Counter()
    for s, a in enumerate(order.twists):
        part = monomial_hilbert_numerator(per_slot.get(s, []))
        for k, c in part.items():
            num[k + a] += c
    return HilbertSeries(num, order.ring.n)


def ideal_from_resolution_check(J, res, degrees):
    """``dim (R/J)_d`` equals the Euler characteristic for each ``d`` (True/False)."""
    hs = hilbert_series(J)
    return all(hs.coefficient(d) == res.euler_characteristic(d) for d in degrees)

