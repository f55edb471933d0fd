"""Command line interface: ``thickenings <command> ...``.

Exit codes: 0 success, 1 reproduction mismatch or invalid request, 2 parse
error in the ideal spec, 3 budget exhausted (partial output is flushed and
marked), 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from ._engine import Budget
from .cache import Cache, cache_key
from .errors import AlgebraError, BudgetExceeded, InvariantViolation, ParseError, UnknownExample
from .ext import Thickenings, limit_rank_oracle
from .ideals import CATALOG, example_catalog, ideal_power
from .resolution import free_resolution, hilbert_function, hilbert_series
from .ring import field_from_name
from .specs import parse_ideal_spec
from .stabilization import build_table, check_stabilization, growth_check, kodaira_check

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3, 4
INCOMPLETE = "# INCOMPLETE: budget exceeded"


def parse_range(text):
    """``-12..-6``, ``-12:-6``, ``-6,-7,-9`` or a single integer; ranges run high to low."""
    text = str(text).strip()
    for sep in ("..", ":"):
        if sep in text[1:]:
            i = text.index(sep, 1)
            a, b = int(text[:i]), int(text[i + len(sep):])
            lo, hi = min(a, b), max(a, b)
            return list(range(hi, lo - 1, -1))
    return [int(x) for x in text.split(",") if x.strip()]


def _ints(text):
    return parse_range(text)


# ---------------------------------------------------------------------------
# data files


def data_path(name):
    return resources.files("thickenings").joinpath("data", name)


def load_schema(name):
    return json.loads(data_path(name).read_text())


def load_expected(name):
    try:
        text = data_path(f"expected/{name}.json").read_text()
    except FileNotFoundError:
        raise UnknownExample(f"no reproduction target {name!r}; known: {', '.join(reproduce_targets())}") from None
    data = json.loads(text)
    validate(data, "expected.schema.json")
    return data


def reproduce_targets():
    d = data_path("expected")
    return sorted(p.name[:-5] for p in d.iterdir() if p.name.endswith(".json"))


def validate(obj, schema_name):
    import jsonschema

    jsonschema.validate(obj, load_schema(schema_name))


# ---------------------------------------------------------------------------
# commands


def _ideal(args):
    if args.example:
        if args.spec:
            raise ParseError("give either a spec or --example, not both", 0, args.spec)
        field = field_from_name(args.field) if args.field else None
        try:
            _, I, _ = example_catalog(args.example, field) if field else example_catalog(args.example)
        except UnknownExample as e:
            raise ParseError(str(e), 0, args.example) from None
        return I
    if not args.spec:
        raise ParseError("an ideal spec or --example is required", 0, "")
    I = parse_ideal_spec(args.spec).ideal
    if args.field:
        I = I.with_field(field_from_name(args.field))
    return I


def _budget(args):
    return Budget(args.max_seconds) if args.max_seconds else None


def _cache(args):
    return Cache(args.cache_dir, enabled=not args.no_cache)


def cmd_gb(args, out):
    I = _ideal(args)
    G = I.gb(_budget(args))
    for g in G.generators:
        print(g.to_str(), file=out)
    return EXIT_OK


def _resolution(args, J):
    cache = _cache(args)
    key = cache_key("resolution", J)
    return cache.get_or_compute(key, lambda: free_resolution(J, _budget(args)))


def _power(args, I):
    t = getattr(args, "t", None)
    return I if not t or t == 1 else ideal_power(I, t)


def cmd_resolve(args, out):
    res = _resolution(args, _power(args, _ideal(args)))
    if args.format == "json":
        print(json.dumps({"ranks": res.ranks(), "twists": [res.twists(i) for i in range(res.length + 1)]}), file=out)
        return EXIT_OK
    for i in range(res.length + 1):
        parts = []
        for a in sorted(set(res.twists(i))):
            c = res.twists(i).count(a)
            parts.append(f"R(-{a})^{c}" if a else f"R^{c}")
        print(f"F_{i}: " + " + ".join(parts), file=out)
    return EXIT_OK


def cmd_betti(args, out):
    res = _resolution(args, _power(args, _ideal(args)))
    b = res.betti()
    print(b.to_json() if args.format == "json" else b.to_text().rstrip("\n"), file=out)
    return EXIT_OK


def cmd_hilbert(args, out):
    J = _power(args, _ideal(args))
    if args.degree is not None:
        for d in _ints(args.degree):
            print(hilbert_function(J, d) if len(_ints(args.degree)) == 1 else f"{d} {hilbert_function(J, d)}",
                  file=out)
        return EXIT_OK
    print(hilbert_series(J).to_str(), file=out)
    return EXIT_OK


def cmd_ext(args, out):
    I = _ideal(args)
    th = Thickenings(I, _budget(args))
    cache = _cache(args)
    t = args.t or 1
    js = _ints(args.j)
    for j in js:
        key = cache_key("ext_cell", I, kappa=args.k, t=t, j=j)
        r = cache.get_or_compute(key, lambda j=j: th.ext_rank(args.k, t, j))
        print(r if len(js) == 1 else f"{j} {r}", file=out)
        out.flush()
    return EXIT_OK


def _table(args, I, with_report=False):
    cache = _cache(args)
    js = _ints(args.j)
    table = build_table(I, args.k, args.t_max, js, mu=args.mu, transitions=not args.no_transitions,
                        budget=_budget(args), jobs=args.jobs, t_min=args.t_min, cache=cache)
    return table


def _emit_table(args, table, report, out):
    if args.format == "json":
        d = table.to_dict(report)
        validate(d, "table.schema.json")
        print(json.dumps(d, indent=2, sort_keys=True), file=out)
    elif args.format == "csv":
        out.write(table.to_csv())
    else:
        out.write(table.to_text())
        if report is not None:
            for c in report.columns.values():
                fst = "-" if c.first_stable_t is None else c.first_stable_t
                const = "-" if c.constant_from is None else c.constant_from
                ok = {True: "respected", False: "VIOLATED", None: "n/a"}[c.bound_respected]
                print(f"j={c.j} m={c.m} stable_from={fst} constant_from={const} t0={c.effective_bound_t0} "
                      f"[{c.regime}] {ok}", file=out)


def _run_table(args, out, with_report):
    I = _ideal(args)
    try:
        table = _table(args, I)
    except BudgetExceeded as e:
        table = getattr(e, "table", None)
        if table is not None:
            _emit_table(args, table, None, out)
        if args.format != "text" or table is None:
            print(INCOMPLETE, file=out)
        print(f"budget exceeded at (t, j) = {e.where}", file=sys.stderr)
        return EXIT_BUDGET
    report = check_stabilization(table) if with_report and table.meta.get("dim_X") is not None else None
    _emit_table(args, table, report, out)
    return EXIT_OK


def cmd_table(args, out):
    return _run_table(args, out, False)


def cmd_stabilize(args, out):
    return _run_table(args, out, True)


def cmd_kodaira(args, out):
    I = _ideal(args)
    ks = _ints(args.k) if args.k is not None else None
    viol = kodaira_check(I, ks, args.t_max, _ints(args.m), budget=_budget(args), t_min=args.t_min)
    if args.format == "json":
        print(json.dumps([list(v) for v in viol]), file=out)
    elif not viol:
        print("no violations", file=out)
    else:
        for v in viol:
            print(f"k={v.k} t={v.t} m={v.m} rank={v.rank}", file=out)
    return EXIT_OK


def cmd_growth(args, out):
    I = _ideal(args)
    rep = growth_check(I, args.k, args.t_max, args.m, t_min=args.t_min, budget=_budget(args))
    if args.format == "json":
        print(json.dumps(rep.to_dict()), file=out)
        return EXIT_OK
    print(" ".join(str(rep.ranks[t]) for t in sorted(rep.ranks)), file=out)
    verdict = []
    if rep.strictly_increasing:
        verdict.append("strictly increasing")
    if rep.eventually_constant:
        verdict.append(f"constant from t={rep.constant_from}")
    print(", ".join(verdict) or "neither increasing nor constant", file=out)
    return EXIT_OK


def reproduce(name, t_max=None, budget=None, cache=None, jobs=1):
    """Recompute a bundled target; returns ``(mismatches, computed rows)``."""
    data = load_expected(name)
    t_max = t_max or data["default_t_max"]
    field = field_from_name(data["field"])
    _, I, _ = example_catalog(data["example"], field)
    rows = {r["t"]: r["cells"] for r in data["rows"] if r["t"] <= t_max}
    if not rows:
        raise AlgebraError(f"target {name!r} has no rows with t <= {t_max}")
    got = {}
    mismatches = []
    if data["kind"] == "ext_table":
        js = data["j"]
        table = build_table(I, data["kappa"], max(rows), js, transitions=False, budget=budget,
                            t_min=min(rows), cache=cache, jobs=jobs)
        for t, cells in rows.items():
            got[t] = table.row(t)
            for j, (want, _), have in zip(js, cells, got[t]):
                if want != have:
                    mismatches.append((t, j, want, have))
        lim = data.get("limit_row")
        if lim and lim.get("mu"):
            for j, (want, _) in zip(js, lim["cells"]):
                have = limit_rank_oracle(lim["mu"], I.ring.n - 1, data["kappa"], j)
                if want != have:
                    mismatches.append(("lim", j, want, have))
    else:
        th = Thickenings(I, budget)
        for t, cells in rows.items():
            have = th.sheaf_rank(data["k"], t, data["m"])
            got[t] = [have]
            if cells[0][0] != have:
                mismatches.append((t, data["m"], cells[0][0], have))
    return mismatches, got


def cmd_reproduce(args, out):
    if args.list:
        for n in reproduce_targets():
            print(n, file=out)
        return EXIT_OK
    if not args.name:
        raise ParseError("reproduce needs a target name (see --list)", 0, "")
    try:
        mism, got = reproduce(args.name, args.t_max, _budget(args), _cache(args), args.jobs)
    except UnknownExample as e:
        raise ParseError(str(e), 0, args.name) from None
    for t in sorted(got):
        print(f"{t}: " + " ".join(str(v) for v in got[t]), file=out)
    if mism:
        for t, j, want, have in mism:
            print(f"MISMATCH t={t} j={j}: expected {want}, got {have}", file=out)
        return EXIT_MISMATCH
    print(f"{args.name}: OK", file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser():
    p = argparse.ArgumentParser(prog="thickenings", description="Ext, local and sheaf cohomology of thickenings.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, spec=True):
        if spec:
            sp.add_argument("spec", nargs="?", help='ideal spec, e.g. "ring(Q,x,y); ideal(x^2, y^3)"')
            sp.add_argument("--example", choices=CATALOG, help="catalog example instead of a spec")
            sp.add_argument("--field", help="coefficient field (Q, GF(p))")
        sp.add_argument("--max-seconds", type=float, default=None, help="wall-clock budget")
        sp.add_argument("--cache-dir", default=None, help="result cache (default: $THICKENINGS_CACHE_DIR)")
        sp.add_argument("--no-cache", action="store_true")
        sp.add_argument("--format", choices=("text", "csv", "json"), default="text")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for table rows")

    sp = sub.add_parser("gb", help="reduced Gröbner basis")
    common(sp)
    sp.set_defaults(func=cmd_gb)

    for name, func, helptext in (("resolve", cmd_resolve, "minimal free resolution"),
                                 ("betti", cmd_betti, "Betti table")):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("--t", type=int, default=1, help="resolve the t-th power")
        sp.set_defaults(func=func)

    sp = sub.add_parser("hilbert", help="Hilbert series or function of R/J")
    common(sp)
    sp.add_argument("--degree", help="degree or range")
    sp.add_argument("--t", type=int, default=1)
    sp.set_defaults(func=cmd_hilbert)

    sp = sub.add_parser("ext", help="rank Ext^k(R/I^t, R)_j")
    common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--j", required=True, help="degree or range such as --j=-12..-6")
    sp.set_defaults(func=cmd_ext)

    for name, func in (("table", cmd_table), ("stabilize", cmd_stabilize)):
        sp = sub.add_parser(name, help="Ext table over (t, j)" if name == "table" else "table plus stabilization report")
        common(sp)
        sp.add_argument("--k", type=int, required=True, help="Ext index")
        sp.add_argument("--t-max", type=int, required=True)
        sp.add_argument("--t-min", type=int, default=1)
        sp.add_argument("--j", required=True, help="range such as --j=-12..-6")
        sp.add_argument("--mu", type=int, default=None, help="multiplicity for the limit row")
        sp.add_argument("--no-transitions", action="store_true")
        sp.set_defaults(func=func)

    sp = sub.add_parser("kodaira", help="nonzero H^k(X_t, O(m)) for m <= 0")
    common(sp)
    sp.add_argument("--k", default=None, help="sheaf indices (default: below codim Sing X)")
    sp.add_argument("--t-max", type=int, default=1)
    sp.add_argument("--t-min", type=int, default=1)
    sp.add_argument("--m", required=True, help="twists such as --m=-3..-1")
    sp.set_defaults(func=cmd_kodaira)

    sp = sub.add_parser("growth", help="rank H^k(X_t, O(m)) along t")
    common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--t-max", type=int, required=True)
    sp.add_argument("--t-min", type=int, default=1)
    sp.add_argument("--m", type=int, default=0)
    sp.set_defaults(func=cmd_growth)

    sp = sub.add_parser("reproduce", help="recompute a bundled table and compare")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--t-max", type=int, default=None)
    sp.add_argument("--list", action="store_true")
    common(sp, spec=False)
    sp.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        if e.text and e.position is not None:
            print(f"  {e.text}\n  {' ' * e.position}^", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as e:
        print(INCOMPLETE, file=out)
        print(f"budget exceeded: {e} (at {e.where})", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as e:
        print(f"internal invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except AlgebraError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
