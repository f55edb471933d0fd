import itertools
from collections import Counter

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from thickenings.errors import BudgetExceeded, InvalidInput
from thickenings.ideals import GradedIdeal, example_catalog, ideal_power
from thickenings.modules import GradedFreeModule, ModuleMap
from thickenings.resolution import (
    HilbertSeries,
    Resolution,
    free_resolution,
    hilbert_function,
    hilbert_series,
    minimalize,
)
from thickenings.ring import GF, PolyRing


@pytest.mark.parametrize(
    "name, ranks",
    [
        ("segre_2x3", [1, 3, 2]),
        ("thickening_J_2x3", [1, 3, 3, 1]),
        ("cone_2x3", [1, 3, 2]),
        ("lci_P1_thickening", [1, 8, 14, 9, 2]),
        ("quadric_cone_segre", [1, 9, 16, 9, 1]),
    ],
)
def test_catalog_resolutions(name, ranks):
    _, I, _ = example_catalog(name)
    res = free_resolution(I)
    assert res.ranks() == ranks
    assert res.check_complex()
    for d in range(8):
        assert res.euler_characteristic(d) == hilbert_function(I, d)


@pytest.mark.parametrize("name", ["segre_2x3", "thickening_J_2x3", "lci_P1_thickening"])
def test_betti_numbers_against_koszul_homology(name):
    _, I, _ = example_catalog(name)
    b = free_resolution(I).betti()
    top = max(d for _, d in b.entries)
    for i in range(len(b.totals()) + 1):
        for d in range(top + 1):
            assert b[(i, d)] == oracles.koszul_betti(I, i, d), (i, d)


def test_exactness_degreewise():
    _, I, _ = example_catalog("thickening_J_2x3")
    assert free_resolution(I).check_exact()
    _, I, _ = example_catalog("segre_2x3")
    assert free_resolution(ideal_power(I, 2)).check_exact()


def test_two_hilbert_series_agree():
    for name in ("segre_2x3", "cone_2x3", "quadric_cone_segre"):
        _, I, _ = example_catalog(name)
        for t in (1, 2):
            P = ideal_power(I, t)
            assert free_resolution(P).hilbert_series().reduced() == hilbert_series(P).reduced()


def test_segre_powers_betti_shape():
    _, I, _ = example_catalog("segre_2x3")
    res = free_resolution(ideal_power(I, 2))
    assert res.twists(0) == [0]
    assert sorted(res.twists(1)) == [4] * 6
    assert res.pd == 3


@st.composite
def complete_intersections(draw):
    n = draw(st.integers(2, 4))
    ring = PolyRing([f"x{i}" for i in range(n)])
    c = draw(st.integers(1, n))
    degs = draw(st.lists(st.integers(1, 3), min_size=c, max_size=c))
    gens = []
    for d in degs:
        mons = oracles.monomials(n, d)
        picks = draw(st.lists(st.sampled_from(mons), min_size=1, max_size=4, unique=True))
        coefs = draw(st.lists(st.integers(-3, 3).filter(bool), min_size=len(picks), max_size=len(picks)))
        gens.append(ring.from_terms(list(zip(picks, coefs))))
    return ring, gens, degs


@settings(max_examples=30, deadline=None)
@given(complete_intersections())
def test_koszul_resolution_of_complete_intersections(data):
    ring, gens, degs = data
    J = GradedIdeal(ring, gens)
    # regular sequences are exactly those with the complete intersection series
    ci = HilbertSeries(_product(degs), ring.n)
    assume(hilbert_series(J).reduced() == ci.reduced())
    res = free_resolution(J)
    c = len(degs)
    assert res.ranks() == [len(list(itertools.combinations(range(c), i))) for i in range(c + 1)]
    for i in range(c + 1):
        expect = Counter(sum(S) for S in itertools.combinations(degs, i))
        assert Counter(res.twists(i)) == expect


def _product(degs):
    poly = Counter({0: 1})
    for d in degs:
        nxt = Counter()
        for a, v in poly.items():
            nxt[a] += v
            nxt[a + d] -= v
        poly = nxt
    return poly


def test_minimalize_cancels_units():
    R = PolyRing("x y")
    x, y = R.gens()
    F0 = GradedFreeModule(R, [0])
    F1 = GradedFreeModule(R, [1, 1])
    F2 = GradedFreeModule(R, [1])
    d1 = ModuleMap.from_columns(F1, F0, [{0: x}, {0: x}])
    d2 = ModuleMap.from_columns(F2, F1, [{0: R.one(), 1: -R.one()}])
    res = Resolution(R, [d1, d2])
    assert res.has_unit_entries()
    m = minimalize(res)
    assert m.ranks() == [1, 1]
    assert not m.has_unit_entries()


def test_module_resolution():
    R = PolyRing("x y z")
    x, y, z = R.gens()
    F = GradedFreeModule(R, [0, 0])
    src = GradedFreeModule(R, [1, 1])
    A = ModuleMap.from_columns(src, F, [{0: x, 1: y}, {0: y, 1: z}])
    res = free_resolution(A)
    assert res.ranks()[0] == 2
    assert res.check_complex()


def test_char_p_complete_intersection():
    # x^2 + y^2 = (x + y)^2 over GF(2) is still a nonzerodivisor modulo z
    R = PolyRing("x y z", GF(2))
    x, y, z = R.gens()
    res = free_resolution(GradedIdeal(R, [x * x + y * y, z]))
    assert res.ranks() == [1, 2, 1]


def test_budget_and_bad_input():
    _, I, _ = example_catalog("segre_3x3")
    with pytest.raises(BudgetExceeded):
        free_resolution(ideal_power(I, 3), budget=0.0)
    with pytest.raises(InvalidInput):
        free_resolution("x")


def test_betti_table_text():
    _, I, _ = example_catalog("segre_2x3")
    text = free_resolution(I).betti().to_text().splitlines()
    assert text[0].split() == ["total:", "1", "3", "2"]
    assert text[2].split() == ["1:", ".", "3", "2"]


def test_hilbert_series_text():
    _, I, _ = example_catalog("segre_2x3")
    assert hilbert_series(I).to_str() == "(1 + 2*z)/(1-z)^4"
    assert hilbert_series(I).dimension == 4
