"""Minimal graded free resolutions by iterated Schreyer steps.

Each step runs an augmented Gröbner basis of the columns of ``d_k`` with a
tracking block.  The minimal syzygies it reports are the columns of
``d_{k+1}``, already expressed in the Schreyer order of ``F_k``; the retained
basis doubles as a lifting oracle for chain maps.
"""

from __future__ import annotations

from ._engine import Basis, Budget
from .errors import InvalidInput


class Step:
    """Data of ``d_k : F_k -> F_{k-1}``.

    ``source`` / ``target`` are the Schreyer orders of ``F_k`` and ``F_{k-1}``
    and ``columns`` the column vectors keyed in ``target``.  ``basis`` (built
    lazily) is the tracked Gröbner basis of the image.
    """

    def __init__(self, target, source, columns):
        self.target = target
        self.source = source
        self.columns = columns
        self.basis = None
        self.aug = None

    @property
    def rank(self):
        return len(self.columns)

    def aug_order(self):
        from .modules import TermOrder

        if self.aug is None:
            self.aug = TermOrder.augmented(self.target, self.source.base, self.source.twists)
            if self.aug.sb != self.source.sb:
                raise InvalidInput("source order must share the slot width of the augmented order")
        return self.aug

    def _inputs(self):
        aug = self.aug_order()
        r = self.target.rank
        gens = []
        for pos, vec in enumerate(self.columns):
            g = self.target.recode(vec, aug)
            g[aug.key(0, r + pos)] = self.target.ring.field.one
            gens.append(g)
        return gens

    def run(self, budget=None):
        """Build the tracked basis; returns ``(basis, minimal syzygies)``."""
        aug = self.aug_order()
        b = Basis(aug, track_from=self.target.rank, budget=budget)
        b.run(self._inputs(), list(self.source.twists))
        self.basis = b
        return b

    def lift(self, vec):
        """A preimage under ``d_k`` of ``vec`` (keyed in ``target``), keyed in ``source``."""
        if self.basis is None:
            self.run()
        aug = self.aug
        r = self.target.rank
        w = self.basis.lift(self.target.recode(vec, aug))
        return {k + r: c for k, c in w.items()}


def resolve_columns(target, columns, degrees, budget=None, max_length=None):
    """Resolve the cokernel of the map with the given minimal columns.

    ``target`` is the order of ``F_0``; ``columns`` must minimally generate
    the image.  Returns the list of steps (``d_1, d_2, ...``).
    """
    from .modules import TermOrder, _slot_bits

    budget = budget or Budget()
    steps = []
    if not columns:
        return steps
    src = TermOrder.schreyer(target, [max(c) for c in columns], degrees, _slot_bits(target.rank + len(columns)))
    step = Step(target, src, columns)
    n = target.ring.n
    limit = n + 1 if max_length is None else max_length
    while True:
        steps.append(step)
        if len(steps) >= limit:
            break
        b = step.run(budget)
        syz = [b.elems[i] for i in b.min_syz]
        if not syz:
            break
        aug = step.aug
        r = step.target.rank
        cols = [{k + r: c for k, c in v.items()} for v in syz]
        degs = [aug.vector_degree(v) for v in syz]
        # the next Schreyer order shares the slot width of the augmented one
        nsrc = TermOrder.schreyer(step.source, [max(c) for c in cols], degs, _slot_bits(len(syz) + step.rank))
        step = Step(step.source, nsrc, cols)
    return steps


def minimal_generators(order, vectors, budget=None):
    """Indices of a minimal generating subset (in degree order) of homogeneous vectors."""
    b = Basis(order, budget=budget)
    b.run(vectors)
    if any(v is None for v in vectors):
        raise InvalidInput("missing vector")
    return sorted(b.minimal_inputs), b
