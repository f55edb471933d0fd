from math import comb

import pytest

import oracles
from conftest import tower
from thickenings.errors import InvalidInput, NotNested
from thickenings.ext import (
    ExtCalculator,
    Thickenings,
    ext_rank,
    lift_chain_map,
    lift_surjection_chain_map,
    limit_rank_oracle,
    sheaf_cohomology_rank,
    sheaf_from_ext,
    transition_map_rank,
)
from thickenings.ideals import GradedIdeal, example_catalog, ideal_power
from thickenings.resolution import free_resolution, hilbert_function
from thickenings.ring import GF, PolyRing


def test_complete_intersection_duality():
    # Ext^c(R/J, R) = (R/J)(d_1 + ... + d_c) for a complete intersection
    R = PolyRing("x y z")
    x, y, z = R.gens()
    J = GradedIdeal(R, [x * x, y**3])
    calc = ExtCalculator(free_resolution(J))
    for j in range(-8, 2):
        assert calc.ext_rank(2, j) == hilbert_function(J, j + 5)
        assert calc.ext_rank(1, j) == 0
        assert calc.ext_rank(0, j) == 0
    assert ext_rank(J, 2, -5) == 1


def test_ext_beyond_pd_and_negative_index():
    _, I, _ = example_catalog("segre_2x3")
    calc = ExtCalculator(free_resolution(I))
    assert calc.ext_rank(7, -6) == 0
    assert calc.ext_rank(-1, -6) == 0
    assert ext_rank(I, 9, -6) == 0


@pytest.mark.parametrize("name", ["segre_2x3", "thickening_J_2x3", "cone_2x3", "lci_P1_thickening"])
def test_methods_agree_with_dense_oracle(name):
    _, I, _ = example_catalog(name)
    res = free_resolution(I)
    calc = ExtCalculator(res)
    for k in range(res.pd + 1):
        for j in range(-8, 1):
            want = oracles.ext_dim(res, k, j)
            assert calc.ext_rank(k, j, "strand") == want, (k, j)
            assert calc.ext_rank(k, j, "series") == want, (k, j)
            if k == res.pd:
                assert calc.ext_rank(k, j, "top") == want, (k, j)


def test_top_shortcut_refuses_lower_index():
    _, I, _ = example_catalog("thickening_J_2x3")
    calc = ExtCalculator(free_resolution(I))
    with pytest.raises(InvalidInput):
        calc.ext_rank(1, -3, "top")
    with pytest.raises(InvalidInput):
        calc.ext_rank(1, -3, "guess")


@pytest.mark.parametrize("name", ["segre_2x3", "thickening_J_2x3", "lci_P1_thickening"])
def test_euler_identity(name):
    _, I, _ = example_catalog(name)
    T = tower(name)
    for t in (1, 2):
        calc = T.calculator(t)
        for j in range(-10, 1):
            lhs = sum((-1) ** k * calc.ext_rank(k, j) for k in range(calc.pd + 1))
            rhs = sum((-1) ** k * calc.hom_dim(k, j) for k in range(calc.pd + 1))
            assert lhs == rhs


@pytest.mark.parametrize("name", ["segre_2x3", "segre_3x3", "cone_2x3", "quadric_cone_segre"])
def test_vanishing_below_height(name):
    _, I, meta = example_catalog(name)
    calc = tower(name).calculator(1)
    for k in range(meta.height):
        for j in range(-12, 2):
            assert calc.ext_rank(k, j) == 0


def test_thickening_J_top_row():
    T = tower("thickening_J_2x3")
    assert [T.ext_rank(3, 1, j) for j in range(-6, 1)] == [1, 4, 9, 16, 25, 36, 49]


def test_kunneth_on_p1_x_p2():
    T = tower("segre_2x3")
    for m in range(-6, 4):
        h0 = (m + 1) * comb(m + 2, 2) if m >= 0 else 0
        h3 = (-m - 1) * comb(-m - 1, 2) if m <= -3 else 0
        assert T.sheaf_rank(0, 1, m) == h0
        assert T.sheaf_rank(1, 1, m) == 0
        assert T.sheaf_rank(2, 1, m) == 0
        assert T.sheaf_rank(3, 1, m) == h3


def test_kunneth_on_p2_x_p2():
    T = tower("segre_3x3")
    for m in (-5, -4, -3, -1, 0, 1):
        h0 = comb(m + 2, 2) ** 2 if m >= 0 else 0
        h4 = comb(-m - 1, 2) ** 2 if m <= -3 else 0
        assert T.sheaf_rank(0, 1, m) == h0
        assert T.sheaf_rank(4, 1, m) == h4
        assert T.sheaf_rank(2, 1, m) == 0


def test_sheaf_dictionary():
    seen = []

    def ext(k, j):
        seen.append((k, j))
        return 10 * k

    assert sheaf_from_ext(4, 2, 1, ext, lambda d: 0) == 20
    assert seen == [(2, -6)]
    assert sheaf_from_ext(4, 0, 1, ext, lambda d: 7) == 7 - 50 + 40


def test_one_shot_sheaf_entry_point():
    _, I, _ = example_catalog("segre_2x3")
    assert sheaf_cohomology_rank(I, 0, 1, 1) == 6
    with pytest.raises(InvalidInput):
        sheaf_cohomology_rank(I, 0, 0, 1)


def test_limit_oracle():
    assert limit_rank_oracle(1, 5, 3, -12) == 462
    assert limit_rank_oracle(1, 5, 3, -6) == 1
    assert limit_rank_oracle(1, 5, 3, -5) == 0
    assert limit_rank_oracle(2, 5, 3, -7) == 12
    with pytest.raises(InvalidInput):
        limit_rank_oracle(0, 5, 3, -7)


def test_chain_maps_commute():
    T = tower("segre_2x3")
    for t in (1, 2):
        assert T.chain(t).check()
    assert T.chain(1, 3).check()
    assert T.chain(2, 2).check()


def test_chain_map_needs_nesting():
    _, I, _ = example_catalog("segre_2x3")
    with pytest.raises(NotNested):
        lift_surjection_chain_map(I, ideal_power(I, 2))


def test_identity_transition_is_full_rank():
    T = tower("segre_2x3")
    for j in (-6, -7, -8):
        s, t, r = T.transition(3, 2, j, 2)
        assert s == t == r


def test_composite_matches_direct_lift():
    T = tower("segre_2x3")
    direct = lift_chain_map(T.resolution(3), T.resolution(1))
    from thickenings.ext import induced_map_rank

    for j in (-6, -7, -8, -9):
        via = T.transition(3, 1, j, 3)
        assert via == induced_map_rank(direct, T.calculator(1), T.calculator(3), 3, j)


def test_segre_transitions_injective():
    T = tower("segre_2x3")
    got = {(t, j): T.transition(3, t, j) for t in (2, 3) for j in (-6, -7, -8)}
    assert got[(3, -8)] == (3, 21, 3)
    assert got[(3, -7)] == (6, 6, 6)
    for s, tg, r in got.values():
        assert r == s <= tg


def test_transition_entry_point():
    _, I, _ = example_catalog("segre_2x3")
    assert transition_map_rank(I, 3, 2, -6) == (1, 1, 1)
    assert transition_map_rank(I, 3, 1, -6) == (0, 1, 0)
    with pytest.raises(InvalidInput):
        transition_map_rank(I, 3, 0, -6)


def test_quadric_transition_not_injective():
    T = tower("quadric_cone_segre")
    assert T.transition(5, 2, -8) == (2, 2, 1)


def test_lci_P1_classes_die():
    T = tower("lci_P1_thickening")
    assert T.transition(4, 1, -5) == (2, 7, 0)
    assert T.transition(4, 2, -5) == (7, 15, 0)


def test_lci_P1_global_sections_frozen():
    T = tower("lci_P1_thickening")
    assert [T.sheaf_rank(0, t, 0) for t in (1, 2, 3)] == [3, 8, 16]


def test_cone_h3_frozen():
    T = tower("cone_2x3")
    assert [T.sheaf_rank(3, t, 0) for t in (1, 2, 3)] == [0, 0, 9]


def test_char2_third_power_differs():
    # frozen: over GF(2) the third power has a 3-dimensional Ext^3 in degree -6, against 1 over Q
    T = tower("segre_2x3", GF(2))
    assert [T.ext_rank(3, t, -6) for t in (1, 2, 3)] == [0, 1, 3]
    calc = T.calculator(3)
    assert calc.ext_rank(3, -6, "strand") == calc.ext_rank(3, -6, "series") == 3
    assert oracles.ext_dim(T.resolution(3), 3, -6, p=2) == 3


def test_char2_value_from_rational_resolution():
    # the Q resolution of I^3 stays exact mod 2, and its top cokernel jumps from 1 to 3
    res = tower("segre_2x3").resolution(3)
    red = oracles.reduce_resolution_mod(res, 2)
    assert red.check_complex() and red.check_exact(p=2)
    assert oracles.ext_dim(res, 3, -6) == 1
    assert oracles.ext_dim(red, 3, -6, p=2) == 3


def test_other_characteristics_agree_with_q_at_low_powers():
    Q = tower("segre_2x3")
    F3 = tower("segre_2x3", GF(3))
    for t in (1, 2):
        for j in (-6, -7, -8):
            assert Q.ext_rank(3, t, j) == F3.ext_rank(3, t, j)


def test_thickenings_power_cache():
    _, I, _ = example_catalog("segre_2x3")
    T = Thickenings(I)
    assert T.power(1) is I
    assert T.power(2) is T.power(2)
    assert T.n == 5
    with pytest.raises(InvalidInput):
        T.chain(2, 1)
