"""Slow, independent reference computations used by the tests.

Nothing here touches the Gröbner or resolution engines: ranks use dense
Fraction (or mod p) Gaussian elimination and ideal components are spanned
directly by monomial multiples of generators.
"""

import itertools
from fractions import Fraction
from math import comb


def dense_rank(matrix, p=0):
    rows = [[Fraction(int(x)) if p == 0 else int(x) % p for x in r] for r in matrix]
    rows = [list(map(_frac, r)) if p == 0 else r for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = (1 / rows[rank][c]) if p == 0 else pow(rows[rank][c], p - 2, p)
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
                if p:
                    rows[i] = [a % p for a in rows[i]]
        rank += 1
    return rank


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def monomials(nvars, d):
    if d < 0:
        return []
    out = []
    for c in itertools.combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in c:
            e[i] += 1
        out.append(tuple(e))
    return out


def poly_dict(f):
    return {tuple(e): Fraction(int(c.numerator), int(c.denominator)) if hasattr(c, "denominator") else Fraction(int(c))
            for e, c in f.exponent_terms()}


def ideal_component_dim(gens, nvars, d, p=0):
    """``dim J_d`` for the ideal spanned by the polynomial dicts ``gens``."""
    basis = {m: i for i, m in enumerate(monomials(nvars, d))}
    rows = []
    for g in gens:
        dg = sum(next(iter(g)))
        for mu in monomials(nvars, d - dg):
            row = [0] * len(basis)
            for e, c in g.items():
                row[basis[tuple(a + b for a, b in zip(e, mu))]] += c
            rows.append(row)
    if not rows:
        return 0
    return dense_rank(rows, p)


def quotient_dim(ideal, d, p=0):
    """``dim (R/J)_d`` by brute force."""
    n = ideal.ring.n
    gens = [poly_dict(g) for g in ideal.generators]
    return comb(d + n - 1, n - 1) - ideal_component_dim(gens, n, d, p)


def koszul_betti(ideal, i, d, p=0):
    """``beta_{i,d} = dim Tor_i(R/J, k)_d`` from the Koszul complex on the variables.

    Uses only normal forms modulo a Gröbner basis of ``J`` and the sparse
    rank of :mod:`thickenings.linalg`, which is itself checked against
    :func:`dense_rank`.
    """
    from thickenings.linalg import rank as sparse_rank

    ring = ideal.ring
    G = ideal.gb()
    N = ring.n
    lts = [m.exponents for m in G.leading_monomials()]

    def standard(e):
        return [m for m in monomials(N, e) if not any(all(a <= b for a, b in zip(l, m)) for l in lts)]

    def term_dim(k):
        return comb(N, k) * len(standard(d - k)) if 0 <= k <= N else 0

    def diff_rank(k):
        # d_k : K_k,d -> K_{k-1},d
        if k < 1 or k > N or d - k < 0:
            return 0
        src = [(S, m) for S in itertools.combinations(range(N), k) for m in standard(d - k)]
        tgt_mons = {m: j for j, m in enumerate(standard(d - k + 1))}
        subsets = {S: j for j, S in enumerate(itertools.combinations(range(N), k - 1))}
        width = len(tgt_mons)
        if not src or not width:
            return 0
        rows = []
        for S, m in src:
            row = {}
            for pos, s in enumerate(S):
                e = list(m)
                e[s] += 1
                nf = G.normal_form(ring.from_terms([(tuple(e), 1)]))
                base = subsets[S[:pos] + S[pos + 1 :]] * width
                sign = -1 if pos % 2 else 1
                for ex, c in poly_dict(nf).items():
                    if p:
                        c = int(c) % p
                    key = base + tgt_mons[ex]
                    row[key] = row.get(key, 0) + sign * c
            rows.append({k: v for k, v in row.items() if v})
        return sparse_rank(rows, p)

    return term_dim(i) - diff_rank(i) - diff_rank(i + 1)


def ext_dim(res, k, j, p=0):
    """``dim Ext^k(M, R)_j`` from the polynomial entries of the differentials.

    ``Hom(F_k, R)_j`` has basis ``(generator g, monomial of degree j + a_g)``;
    ``d^T`` sends ``mu e_g^*`` to ``sum_h mu d[g][h] e_h^*``.
    """
    from thickenings.linalg import rank as sparse_rank

    ring = res.ring
    N = ring.n

    def basis(i):
        out = []
        for g, a in enumerate(res.twists(i)):
            out += [(g, m) for m in monomials(N, j + a)]
        return out

    def dual_rank(i):
        # d_i^T : Hom(F_{i-1}, R)_j -> Hom(F_i, R)_j
        if i < 1 or i > res.length:
            return 0
        src, tgt = basis(i - 1), basis(i)
        index = {b: c for c, b in enumerate(tgt)}
        entries = res.maps[i - 1].entries
        rows = []
        for g, mu in src:
            row = {}
            for h, poly in enumerate(entries[g]):
                for e, c in poly_dict(poly).items():
                    if p:
                        c = int(c) % p
                    key = index[(h, tuple(a + b for a, b in zip(mu, e)))]
                    row[key] = row.get(key, 0) + c
            rows.append({kk: v for kk, v in row.items() if v})
        return sparse_rank(rows, p)

    return len(basis(k)) - dual_rank(k) - dual_rank(k + 1)


def reduce_resolution_mod(res, p):
    """The resolution's matrices with columns scaled to primitive integers, reduced mod ``p``.

    Column scaling keeps it a complex; exactness mod ``p`` has to be checked.
    """
    from math import lcm

    from thickenings.modules import GradedFreeModule, ModuleMap
    from thickenings.resolution import Resolution
    from thickenings.ring import GF

    ring = res.ring.with_field(GF(p))
    maps = []
    for A in res.maps:
        cols = []
        for c in range(A.source.rank):
            col = {r: poly_dict(poly) for r, poly in A.column(c).items()}
            L = lcm(*[v.denominator for d in col.values() for v in d.values()])
            out = {}
            for r, d in col.items():
                terms = [(e, int(v * L) % p) for e, v in d.items() if int(v * L) % p]
                if terms:
                    out[r] = ring.from_terms(terms)
            cols.append(out)
        src = GradedFreeModule(ring, A.source.twists)
        tgt = GradedFreeModule(ring, A.target.twists)
        maps.append(ModuleMap.from_columns(src, tgt, cols, check=False))
    return Resolution(ring, maps)
