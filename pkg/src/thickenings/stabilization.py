"""Cohomology tables of thickenings and the checks run on them.

A table fixes an Ext index ``kappa`` and records ``rank Ext^kappa(R/I^t, R)_j``
over a grid of ``(t, j)`` together with the ranks of the transition maps
``t -> t+1``.  By duality the column ``j`` is ``H^{n-kappa}(X_t, O(m))`` with
``m = -n-1-j``.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ._engine import Budget
from .errors import BudgetExceeded, InvalidInput
from .ext import Thickenings, limit_rank_oracle


def effective_bound(dim_X, m):
    """First thickening index from which the transition maps are controlled."""
    return max(1, dim_X + m + 2)


def codim_sing(meta):
    """``codim(Sing X)`` inside ``X``; a smooth ``X`` counts as ``dim X``."""
    if meta.sing_dim < 0:
        return meta.dim_X
    return meta.dim_X - meta.sing_dim


@dataclass
class CohomologyTable:
    name: str
    n: int
    kappa: int
    ts: list
    js: list
    entries: dict
    transitions: dict = field(default_factory=dict)
    limit_row: dict | None = None
    meta: dict = field(default_factory=dict)
    incomplete: bool = False

    def entry(self, t, j):
        return self.entries.get((t, j))

    def twist(self, j):
        return -self.n - 1 - j

    @property
    def sheaf_index(self):
        return self.n - self.kappa

    def column(self, j):
        return [self.entries.get((t, j)) for t in self.ts]

    def row(self, t):
        return [self.entries.get((t, j)) for j in self.js]

    def validate(self):
        for (t, j), v in self.entries.items():
            if v < 0:
                raise InvalidInput(f"negative entry at t={t}, j={j}")
        for (t, j), (s, tg, r) in self.transitions.items():
            if r < 0 or r > min(s, tg):
                raise InvalidInput(f"transition rank out of range at t={t}, j={j}")
        return True

    def first_stable_t(self, j):
        """First ``t`` at which the column reaches the limit and maps isomorphically onward."""
        if self.limit_row is None:
            return None
        lim = self.limit_row[j]
        for t in self.ts:
            a, b = self.entries.get((t, j)), self.entries.get((t + 1, j))
            tr = self.transitions.get((t, j))
            if a == lim and b == lim and tr is not None and tr[2] == lim:
                return t
        return None

    def constant_from(self, j):
        """First ``t`` after which the column is constant (with isomorphic maps) up to ``t_max``."""
        col = self.column(j)
        if None in col or len(col) < 2:
            return None
        start = None
        for i in range(len(col) - 1, 0, -1):
            t = self.ts[i - 1]
            tr = self.transitions.get((t, j))
            if col[i - 1] == col[i] and tr is not None and tr[2] == col[i]:
                start = t
            else:
                break
        return start

    # output ------------------------------------------------------------
    def to_text(self):
        """Grid as in a printed table: one row per ``t``, zeros left blank."""
        head = ["t\\j"] + [str(j) for j in self.js]
        lines = [head]
        for t in self.ts:
            cells = [str(t)]
            for j in self.js:
                v = self.entries.get((t, j))
                cells.append("?" if v is None else ("" if v == 0 else str(v)))
            lines.append(cells)
        if self.limit_row is not None:
            lines.append(["lim"] + ["" if self.limit_row[j] == 0 else str(self.limit_row[j]) for j in self.js])
        widths = [max(len(r[c]) for r in lines) for c in range(len(head))]
        out = [" ".join(cell.rjust(w) for cell, w in zip(r, widths)).rstrip() for r in lines]
        if self.incomplete:
            out.append("# INCOMPLETE: budget exceeded")
        return "\n".join(out) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t"] + self.js)
        for t in self.ts:
            w.writerow([t] + ["" if self.entries.get((t, j)) is None else self.entries[(t, j)] for j in self.js])
        if self.limit_row is not None:
            w.writerow(["lim"] + [self.limit_row[j] for j in self.js])
        return buf.getvalue()

    def to_dict(self, report=None):
        return {
            "meta": dict(self.meta, name=self.name, n=self.n, kappa=self.kappa, t=self.ts, j=self.js,
                         incomplete=self.incomplete),
            "rows": [{"t": t, "ranks": self.row(t)} for t in self.ts],
            "transitions": [
                {"t": t, "j": j, "source": s, "target": tg, "rank": r}
                for (t, j), (s, tg, r) in sorted(self.transitions.items())
            ],
            "limit_row": None if self.limit_row is None else [self.limit_row[j] for j in self.js],
            "report": None if report is None else report.to_dict(),
        }

    def to_json(self, report=None):
        return json.dumps(self.to_dict(report), indent=2, sort_keys=True)


def _cell(cache, ideal, kappa):
    if cache is None or not cache.enabled:
        return lambda kind, t, j, compute: compute()
    from .cache import cache_key

    def get(kind, t, j, compute):
        return cache.get_or_compute(cache_key(f"{kind}_cell", ideal, kappa=kappa, t=t, j=j), compute)

    return get


def _row_job(args):
    ideal, kappa, t, js, transitions, max_seconds = args
    th = Thickenings(ideal, Budget(max_seconds))
    row = {}
    trans = {}
    for j in js:
        try:
            row[j] = th.ext_rank(kappa, t, j)
            if transitions:
                trans[j] = th.transition(kappa, t, j)
        except BudgetExceeded:
            return t, row, trans, j
    return t, row, trans, None


def build_table(ideal, kappa, t_max, js, mu=None, transitions=True, budget=None, jobs=1, t_min=1, name=None,
                thickenings=None, cache=None):
    """Table of ``rank Ext^kappa(R/I^t, R)_j`` for ``t_min <= t <= t_max`` and ``j`` in ``js``.

    A transition is recorded for each ``t < t_max``.  On budget exhaustion a
    :class:`BudgetExceeded` carrying ``where = (t, j)`` and the partial table
    (``exc.table``) is raised.  With a :class:`~thickenings.cache.Cache` every
    finished cell is stored, so an interrupted table resumes where it stopped.
    """
    if t_max < t_min or t_min < 1:
        raise InvalidInput("need 1 <= t_min <= t_max")
    js = list(js)
    ts = list(range(t_min, t_max + 1))
    meta = ideal.meta
    n = ideal.ring.n - 1
    table = CohomologyTable(name or ideal.name or "ideal", n, kappa, ts, js, {}, {})
    table.meta = {"field": ideal.ring.field.name}
    if meta is not None:
        table.meta.update(height=meta.height, dim_X=meta.dim_X, sing_dim=meta.sing_dim, lci=meta.lci)
    if mu is None and meta is not None and meta.mu is not None and kappa >= meta.height:
        # the catalog multiplicity belongs to the catalog's Ext index
        if meta.kappa is None or meta.kappa == kappa:
            mu = meta.mu
    if mu is not None:
        table.limit_row = {j: limit_rank_oracle(mu, n, kappa, j) for j in js}
        table.meta["mu"] = mu
    elif meta is not None and kappa < meta.height:
        # local cohomology of R with support in I vanishes below the height
        table.limit_row = {j: 0 for j in js}
    max_seconds = budget.max_seconds if isinstance(budget, Budget) else budget
    if jobs > 1:
        args = [(ideal, kappa, t, js, transitions and t < t_max, max_seconds) for t in ts]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_row_job, args))
        failed = None
        cell = _cell(cache, ideal, kappa)
        for t, row, trans, where in results:
            for j, v in row.items():
                table.entries[(t, j)] = cell("ext", t, j, lambda v=v: v)
            for j, v in trans.items():
                table.transitions[(t, j)] = tuple(cell("transition", t, j, lambda v=v: v))
            if where is not None and failed is None:
                failed = (t, where)
        if failed is not None:
            table.incomplete = True
            exc = BudgetExceeded(f"budget exceeded at t={failed[0]}, j={failed[1]}", failed)
            exc.table = table
            raise exc
        return table
    th = thickenings or Thickenings(ideal, budget)
    cell = _cell(cache, ideal, kappa)
    for t in ts:
        for j in js:
            try:
                table.entries[(t, j)] = cell("ext", t, j, lambda: th.ext_rank(kappa, t, j))
            except BudgetExceeded:
                table.incomplete = True
                exc = BudgetExceeded(f"budget exceeded at t={t}, j={j}", (t, j))
                exc.table = table
                raise exc from None
        if transitions and t > t_min:
            for j in js:
                try:
                    table.transitions[(t - 1, j)] = tuple(
                        cell("transition", t - 1, j, lambda: th.transition(kappa, t - 1, j)))
                except BudgetExceeded:
                    table.incomplete = True
                    exc = BudgetExceeded(f"budget exceeded at t={t - 1}, j={j}", (t - 1, j))
                    exc.table = table
                    raise exc from None
    return table


# ---------------------------------------------------------------------------
# reports


@dataclass
class ColumnReport:
    j: int
    m: int
    first_stable_t: int | None
    constant_from: int | None
    effective_bound_t0: int
    regime: str  # "isomorphism", "injective" or "none"
    bound_respected: bool | None

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class StabilizationReport:
    columns: dict
    kodaira_violations: list = field(default_factory=list)

    @property
    def violations(self):
        return [c for c in self.columns.values() if c.bound_respected is False]

    def to_dict(self):
        return {
            "columns": [self.columns[j].to_dict() for j in sorted(self.columns, reverse=True)],
            "kodaira_violations": [list(v) for v in self.kodaira_violations],
        }


def check_stabilization(table, dim_X=None, sing_dim=None):
    """Compare each column's stabilization against the effective bound.

    For sheaf index ``k < codim Sing X - 1`` the maps are isomorphisms from
    ``t0`` on; for ``k = codim Sing X - 1`` they are injective from ``t0`` on.
    A column with twist ``m >= 0`` in either regime that stabilizes inside the
    table must do so by ``t0``, and in the injective regime every computed map
    from ``t0`` on must be injective.
    """
    dim_X = table.meta.get("dim_X") if dim_X is None else dim_X
    sing_dim = table.meta.get("sing_dim", -1) if sing_dim is None else sing_dim
    if dim_X is None:
        raise InvalidInput("dim X is required")
    codim = dim_X if sing_dim < 0 else dim_X - sing_dim
    k = table.sheaf_index
    if k < codim - 1:
        regime = "isomorphism"
    elif k == codim - 1:
        regime = "injective"
    else:
        regime = "none"
    cols = {}
    for j in table.js:
        m = table.twist(j)
        t0 = effective_bound(dim_X, m)
        fst = table.first_stable_t(j)
        respected = None
        if regime != "none" and m >= 0:
            checks = []
            if fst is not None:
                checks.append(fst <= t0)
            for t in table.ts:
                tr = table.transitions.get((t, j))
                if tr is None or t < t0:
                    continue
                if regime == "injective":
                    checks.append(tr[2] == tr[0])
                else:
                    checks.append(tr[2] == tr[0] == tr[1])
            respected = all(checks) if checks else None
        cols[j] = ColumnReport(j, m, fst, table.constant_from(j), t0, regime, respected)
    return StabilizationReport(cols)


@dataclass(frozen=True)
class Violation:
    k: int
    t: int
    m: int
    rank: int

    def __iter__(self):
        return iter((self.k, self.t, self.m, self.rank))


def _thickenings(obj, budget=None):
    return obj if isinstance(obj, Thickenings) else Thickenings(obj, budget)


def kodaira_check(ideal, ks=None, t_max=1, ms=(), budget=None, t_min=1):
    """Nonzero ``H^k(X_t, O(m))`` for ``k`` in ``ks``, ``m <= 0`` in ``ms``.

    ``ks`` defaults to ``k < codim Sing X``, the range with guaranteed
    vanishing for negative twists; a non-empty result is a finding.
    """
    th = _thickenings(ideal, budget)
    ms = list(ms)
    if any(m > 0 for m in ms):
        raise InvalidInput("twists must be non-positive")
    if ks is None:
        meta = th.ideal.meta
        if meta is None:
            raise InvalidInput("the ideal carries no metadata; pass ks explicitly")
        ks = range(codim_sing(meta))
    out = []
    for k in ks:
        for t in range(t_min, t_max + 1):
            for m in ms:
                r = th.sheaf_rank(k, t, m)
                if r:
                    out.append(Violation(k, t, m, r))
    return out


@dataclass
class GrowthReport:
    k: int
    m: int
    ranks: dict
    strictly_increasing: bool
    eventually_constant: bool
    constant_from: int | None

    def to_dict(self):
        return {"k": self.k, "m": self.m, "ranks": [[t, r] for t, r in sorted(self.ranks.items())],
                "strictly_increasing": self.strictly_increasing, "eventually_constant": self.eventually_constant,
                "constant_from": self.constant_from}


def growth_check(ideal, k, t_max, m=0, t_min=1, budget=None):
    """``rank H^k(X_t, O(m))`` for ``t_min <= t <= t_max`` with monotonicity verdicts."""
    th = _thickenings(ideal, budget)
    ranks = {t: th.sheaf_rank(k, t, m) for t in range(t_min, t_max + 1)}
    vals = [ranks[t] for t in sorted(ranks)]
    inc = all(a < b for a, b in zip(vals, vals[1:]))
    start = None
    for i in range(len(vals) - 1, 0, -1):
        if vals[i - 1] == vals[i]:
            start = t_min + i - 1
        else:
            break
    return GrowthReport(k, m, ranks, inc, start is not None, start)


def vanishing_in_limit(ideal, kappa, j, sources, t_max, budget=None):
    """For each source ``t``, the first ``t2 <= t_max`` with ``Ext^kappa(R/I^t)_j -> Ext^kappa(R/I^{t2})_j`` zero.

    ``None`` means the classes survive to ``t_max``.  If every class dies the
    direct limit ``H^kappa_I(R)_j`` receives nothing from that row.
    """
    th = _thickenings(ideal, budget)
    out = {}
    for t in sources:
        hit = None
        if th.ext_rank(kappa, t, j) == 0:
            hit = t
        else:
            for t2 in range(t + 1, t_max + 1):
                if th.transition(kappa, t, j, t2)[2] == 0:
                    hit = t2
                    break
        out[t] = hit
    return out
