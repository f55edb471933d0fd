"""Homogeneous ideals: powers, bracket powers, determinantal ideals and the
catalog of worked examples."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

from ._engine import Basis
from .errors import InvalidExponent, InvalidInput, NotHomogeneous, RingMismatch, UnknownExample
from .groebner import _buchberger, _ring_order, empty_basis, kernel_of_ring_map
from .ring import QQ, PolyRing, Polynomial


@dataclass(frozen=True)
class IdealMeta:
    """Bookkeeping for ``X = Proj R/I``; ``sing_dim = -1`` means smooth."""

    height: int
    dim_X: int
    sing_dim: int = -1
    lci: bool = True
    mu: int | None = None
    kappa: int | None = None


class GradedIdeal:
    """A homogeneous ideal given by generators."""

    def __init__(self, ring, generators, meta=None, name=None):
        self.ring = ring
        gens = []
        for g in generators:
            if not isinstance(g, Polynomial):
                g = ring(g)
            if g.ring != ring:
                raise RingMismatch("generator from another ring")
            if not g.is_homogeneous():
                raise NotHomogeneous(f"{g} is not homogeneous")
            if g:
                gens.append(g)
        self.generators = gens
        if meta is not None and meta.height + meta.dim_X != ring.n - 1:
            raise InvalidInput("height + dim X must equal the projective dimension n")
        self.meta = meta
        self.name = name
        self._gb = None

    @property
    def n(self):
        """``n`` for ``R = F[x_0..x_n]``."""
        return self.ring.n - 1

    def gb(self, budget=None):
        if self._gb is None:
            self._gb = _buchberger(self.ring, self.generators, budget) if self.generators else empty_basis(self.ring)
        return self._gb

    def contains(self, f):
        return self.gb().contains(f)

    def is_subset_of(self, other):
        return all(other.contains(g) for g in self.generators)

    def degrees(self):
        return [g.degree for g in self.generators]

    def minimal_generators(self):
        """A minimal homogeneous generating set chosen among the given generators."""
        o = _ring_order(self.ring)
        vecs = [{o.key(self.ring.mono(k), 0): c for k, c in g._t.items()} for g in self.generators]
        b = Basis(o)
        b.run(vecs)
        return [self.generators[i] for i in sorted(b.minimal_inputs)]

    def canonical(self):
        """Text form of the reduced Gröbner basis; equal ideals give equal strings."""
        return ";".join(g.to_str() for g in self.gb().generators)

    def with_field(self, field):
        ring = self.ring.with_field(field)
        return GradedIdeal(ring, [g.change_ring(ring) for g in self.generators], self.meta, self.name)

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return f"GradedIdeal({', '.join(g.to_str() for g in self.generators)})"


def _normalize(g):
    return g.monic()


def ideal_power(I, t):
    """``I^t`` generated by products of ``t`` generators, redundant ones dropped."""
    if not isinstance(t, int) or t < 1:
        raise InvalidExponent(f"power must be a positive integer, got {t!r}")
    gens = list(I.generators)
    cur = gens
    for _ in range(t - 1):
        seen = {}
        for a in cur:
            for b in gens:
                p = _normalize(a * b)
                seen.setdefault(p, None)
        cur = GradedIdeal(I.ring, list(seen)).minimal_generators()
    meta = I.meta
    return GradedIdeal(I.ring, cur, meta, None if I.name is None else f"{I.name}^{t}")


def _is_monomial(g):
    return len(g) == 1


def _is_prime_power(q, p):
    while q > 1 and q % p == 0:
        q //= p
    return q == 1


def bracket_power(I, q):
    """``I^[q]``: the ideal generated by ``q``-th powers of the listed generators.

    This only depends on the ideal for monomial generators or when ``q`` is a
    power of the characteristic; other uses emit a warning.
    """
    if not isinstance(q, int) or q < 1:
        raise InvalidExponent(f"bracket power must be a positive integer, got {q!r}")
    p = I.ring.field.p
    if q > 1 and not (all(_is_monomial(g) for g in I.generators) or (p and _is_prime_power(q, p))):
        warnings.warn(
            "bracket power of non-monomial generators outside characteristic p depends on the generators",
            stacklevel=2,
        )
    return GradedIdeal(I.ring, [g**q for g in I.generators], None)


def _det(rows, cols, X):
    if len(rows) == 1:
        return X[rows[0]][cols[0]]
    total = None
    for pos, c in enumerate(cols):
        term = X[rows[0]][c] * _det(rows[1:], cols[:pos] + cols[pos + 1 :], X)
        if pos % 2:
            term = -term
        total = term if total is None else total + term
    return total


def generic_minors(rows, cols, size, ring):
    """Ideal of ``size``-minors of the ``rows x cols`` matrix of the ring variables (row-major).

    For maximal minors of a matrix with one more column than rows, minor
    ``i`` deletes column ``i`` and carries the sign ``(-1)^i``, so for the
    2x3 matrix ``(u v w; x y z)`` the generators are ``vz-wy, wx-uz, uy-vx``.
    Otherwise the minors are listed by sorted row and column subsets.
    """
    if ring.n != rows * cols:
        raise RingMismatch(f"a {rows}x{cols} matrix needs {rows * cols} variables, ring has {ring.n}")
    if not 1 <= size <= min(rows, cols):
        raise InvalidInput(f"minor size {size} out of range")
    v = ring.gens()
    X = [v[r * cols : (r + 1) * cols] for r in range(rows)]
    gens = []
    if size == rows and cols == rows + 1:
        for i in range(cols):
            keep = [c for c in range(cols) if c != i]
            d = _det(list(range(rows)), keep, X)
            gens.append(-d if i % 2 else d)
    else:
        for rs in itertools.combinations(range(rows), size):
            for cs in itertools.combinations(range(cols), size):
                gens.append(_det(list(rs), list(cs), X))
    return GradedIdeal(ring, gens)


# ---------------------------------------------------------------------------
# catalog

CATALOG = (
    "segre_2x3",
    "thickening_J_2x3",
    "segre_3x3",
    "cone_2x3",
    "lci_P1_thickening",
    "quadric_cone_segre",
)


def _segre_2x3(field):
    R = PolyRing("u v w x y z", field)
    I = generic_minors(2, 3, 2, R)
    return R, I, IdealMeta(height=2, dim_X=3, sing_dim=-1, mu=1, kappa=3)


def _thickening_J(field):
    R, I, _ = _segre_2x3(field)
    d1, d2, d3 = I.generators
    # not lci anywhere along X; recorded as a singular locus of full dimension
    return R, GradedIdeal(R, [d1**2, d2, d3]), IdealMeta(height=2, dim_X=3, sing_dim=3, lci=False)


def _segre_3x3(field):
    R = PolyRing([f"x{i}{j}" for i in range(3) for j in range(3)], field)
    I = generic_minors(3, 3, 2, R)
    return R, I, IdealMeta(height=4, dim_X=4, sing_dim=-1, kappa=9)


def _cone_2x3(field):
    R = PolyRing("u v w x y z s", field)
    u, v, w, x, y, z, _ = R.gens()
    I = GradedIdeal(R, [v * z - w * y, w * x - u * z, u * y - v * x])
    return R, I, IdealMeta(height=2, dim_X=4, sing_dim=0, lci=False, kappa=3)


def _lci_P1(field):
    R = PolyRing("x y u v w", field)
    x, y, u, v, w = R.gens()
    I = GradedIdeal(R, [u, v, w])
    J = ideal_power(I, 2).generators + [u * y - v * x, v * y - w * x]
    return R, GradedIdeal(R, J), IdealMeta(height=3, dim_X=1, sing_dim=-1, lci=True)


def _quadric_cone_segre(field):
    T = PolyRing("a0 a1 a2 a3 b0 b1", field)
    a = T.gens()[:4]
    b = T.gens()[4:]
    R = PolyRing([f"z{i}{j}" for i in range(4) for j in range(2)], field)
    images = [a[i] * b[j] for i in range(4) for j in range(2)]
    K = kernel_of_ring_map(R, images, [a[1] ** 2 - a[2] * a[3]])
    return R, GradedIdeal(R, K.generators), IdealMeta(height=4, dim_X=3, sing_dim=1, mu=1, kappa=5)


_BUILDERS = {
    "segre_2x3": _segre_2x3,
    "thickening_J_2x3": _thickening_J,
    "segre_3x3": _segre_3x3,
    "cone_2x3": _cone_2x3,
    "lci_P1_thickening": _lci_P1,
    "quadric_cone_segre": _quadric_cone_segre,
}


def example_catalog(name, field=QQ):
    """``(ring, ideal, meta)`` for a named example."""
    try:
        build = _BUILDERS[name]
    except KeyError:
        raise UnknownExample(f"unknown example {name!r}; known: {', '.join(CATALOG)}") from None
    R, I, meta = build(field)
    I.meta = meta
    I.name = name
    return R, I, meta
