"""Exact sparse linear algebra over the rationals and prime fields.

Vectors are dicts ``{index: value}``.  Over the rationals rows are scaled to
primitive integer vectors and eliminated fraction-free (``a*r - b*p`` followed
by removal of the content), so no rational arithmetic and no coefficient
blow-up beyond the content of each row.
"""

from __future__ import annotations

from math import gcd, lcm

import gmpy2


def _to_int_row(row):
    dens = [int(gmpy2.mpq(v).denominator) for v in row.values()]
    L = lcm(*dens) if dens else 1
    return {k: int(gmpy2.mpq(v) * L) for k, v in row.items()}


def _primitive(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (1, 0):
        return {k: v // g for k, v in row.items()}
    return row


class Echelon:
    """Incremental row echelon form.

    ``add(row)`` reduces a new row against the stored pivots and keeps it if
    it is independent.  With ``track=True`` each stored row remembers the
    combination of inserted rows producing it, and rows that reduce to zero
    yield relations (used for kernels).
    """

    def __init__(self, p=0, track=False):
        self.p = p
        self.track = track
        self.pivots = {}
        self.relations = []
        self._count = 0

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, row, combo=None):
        p = self.p
        pivots = self.pivots
        if p:
            row = {k: v % p for k, v in row.items() if v % p}
        else:
            row = _to_int_row(row)
            row = {k: v for k, v in row.items() if v}
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                break
            prow, pcombo = piv
            b = row[c]
            if p:
                # pivot rows are normalised to leading coefficient 1
                for k, v in prow.items():
                    nv = (row.get(k, 0) - b * v) % p
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
                if combo is not None:
                    for k, v in pcombo.items():
                        nv = (combo.get(k, 0) - b * v) % p
                        if nv:
                            combo[k] = nv
                        else:
                            combo.pop(k, None)
            else:
                a = prow[c]
                g = gcd(a, b)
                a, b = a // g, b // g
                new = {k: a * v for k, v in row.items()} if a != 1 else dict(row)
                for k, v in prow.items():
                    nv = new.get(k, 0) - b * v
                    if nv:
                        new[k] = nv
                    else:
                        new.pop(k, None)
                if combo is not None:
                    nc = {k: a * v for k, v in combo.items()} if a != 1 else dict(combo)
                    for k, v in pcombo.items():
                        nv = nc.get(k, 0) - b * v
                        if nv:
                            nc[k] = nv
                        else:
                            nc.pop(k, None)
                    combo = nc
                row = new
                if row:
                    g = 0
                    for v in row.values():
                        g = gcd(g, v)
                        if g == 1:
                            break
                    if combo is not None:
                        for v in combo.values():
                            if g == 1:
                                break
                            g = gcd(g, v)
                    if g > 1:
                        row = {k: v // g for k, v in row.items()}
                        if combo is not None:
                            combo = {k: v // g for k, v in combo.items()}
        return row, combo

    def add(self, row):
        """Insert a row; returns True when it increased the rank."""
        idx = self._count
        self._count += 1
        combo = {idx: 1} if self.track else None
        row, combo = self.reduce(row, combo)
        if not row:
            if self.track and combo:
                self.relations.append(combo)
            return False
        c = min(row)
        if self.p:
            inv = pow(row[c], -1, self.p)
            row = {k: v * inv % self.p for k, v in row.items()}
            if combo is not None:
                combo = {k: v * inv % self.p for k, v in combo.items()}
        self.pivots[c] = (row, combo)
        return True

    def contains(self, row):
        return not self.reduce(row)[0]


def rank(rows, p=0, budget=None):
    """Rank of the matrix with the given sparse rows."""
    rows = sorted((r for r in rows if r), key=len)
    e = Echelon(p)
    for i, r in enumerate(rows):
        if budget is not None and i % 64 == 0:
            budget.check("rank")
        e.add(r)
    return e.rank


def nullspace(rows, p=0, budget=None):
    """Basis of ``{c : sum_i c_i rows[i] = 0}`` as sparse dicts over row indices."""
    e = Echelon(p, track=True)
    for i, r in enumerate(rows):
        if budget is not None and i % 64 == 0:
            budget.check("nullspace")
        e.add(r)
    out = []
    for combo in e.relations:
        if p:
            out.append(combo)
        else:
            out.append(_primitive(combo))
    return out


def dense_rank(matrix, p=0):
    """Rank of a dense list-of-lists matrix (used by tests as an oracle)."""
    return rank([{j: v for j, v in enumerate(row) if v} for row in matrix], p)


def solve_in_span(basis_rows, target, p=0):
    """True if ``target`` lies in the row span of ``basis_rows``."""
    e = Echelon(p)
    for r in basis_rows:
        if r:
            e.add(r)
    return e.contains(target)
