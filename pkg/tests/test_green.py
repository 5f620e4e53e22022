import itertools

import numpy as np
import pytest
from hypothesis import given

import oracles
from conftest import algebras
from skewlat.algebra import holds
from skewlat.corpus import chain, direct_product, rectangular, transpose_dual
from skewlat.green import (dot_d_classes, dot_natural_order, handedness, is_lattice,
                           is_left_handed, is_rectangular, is_right_handed, lattice_image,
                           natural_orders, quotient, relation_D, relation_L, relation_R,
                           verify_first_decomposition, verify_second_decomposition)
from skewlat.identities import (LEFT_LEMMA, LEFT_PREORDER, LEFT_PREORDER_JOIN_PRINTED,
                                RIGHT_PREORDER)
from skewlat.algebra import check_quasi_identity


def test_spinks_d_classes(spinks9):
    assert sorted(relation_D(spinks9).classes) == [(0,), (1,), (2,), (3, 4), (5, 6), (7, 8)]


def test_lattice_relations_are_identity(m3, n5):
    for a in (m3, n5, chain(3)):
        for rel in (relation_R(a), relation_L(a), relation_D(a)):
            assert all(len(c) == 1 for c in rel.classes)


def test_u2_d_classes(u2):
    got = sorted(tuple(sorted(u2.label(x) for x in c)) for c in relation_D(u2).classes)
    assert got == [("a1", "a2"), ("b1", "b2", "b3", "b4", "d1", "d2", "d3", "d4"), ("c1", "c2")]


def test_spinks_quotient_is_six_element_lattice(spinks9):
    lat = lattice_image(spinks9)
    assert lat.order == 6 and is_lattice(lat)
    m = lat.meet.tolist()
    assert all(m[a][b] == m[b][a] for a in range(6) for b in range(6))


def test_lattice_quotient_is_copy(n5):
    assert lattice_image(n5) == n5


def test_u2_quotient_is_three_chain(u2):
    lat = lattice_image(u2)
    assert lat.order == 3 and is_lattice(lat)
    assert natural_orders(lat).partial_order.sum() == 6  # a total order on 3 points


def test_quotient_by_non_congruence_is_reported(spinks9):
    from skewlat.green import EquivalenceRelation, NotACongruence
    mat = np.eye(9, dtype=bool)
    mat[0, 1] = mat[1, 0] = True
    with pytest.raises(NotACongruence):
        quotient(spinks9, EquivalenceRelation.from_matrix(mat))


def test_natural_order_examples(spinks9, u2):
    ge = natural_orders(spinks9).partial_order
    assert ge[2, 5] and ge[2, 6]
    rect = rectangular(2, 3)
    assert np.array_equal(natural_orders(rect).partial_order, np.eye(6, dtype=bool))
    ge = natural_orders(u2).partial_order
    assert ge[u2.index("a1"), u2.index("b1")]
    assert not ge[u2.index("a1"), u2.index("b2")]


def test_handedness_flags(spinks9, m3):
    assert is_left_handed(spinks9) and not is_right_handed(spinks9)
    assert is_right_handed(transpose_dual(spinks9))
    assert is_lattice(m3) and is_left_handed(m3) and is_right_handed(m3)
    assert handedness(m3) == "both"
    assert is_rectangular(rectangular(2, 2)) and not is_rectangular(spinks9)


def test_first_decomposition_examples(spinks9, u2):
    assert verify_first_decomposition(u2).ok
    b = [c for c in relation_D(u2).classes if len(c) == 8][0]
    assert oracles.closed(u2, b)
    rep = verify_first_decomposition(spinks9)
    assert rep.ok and rep.detail["class_sizes"].count(2) == 3
    assert oracles.closed(spinks9, (3, 4))


def test_second_decomposition_examples(spinks9, m3):
    rep = verify_second_decomposition(spinks9)
    assert rep.ok and rep.detail["left_factor_order"] == 9
    lat = verify_second_decomposition(m3)
    assert lat.ok and lat.detail["left_factor_order"] == lat.detail["right_factor_order"] == 5
    prod = direct_product(spinks9, transpose_dual(spinks9))
    rep = verify_second_decomposition(prod)
    assert rep.ok and 9 < rep.detail["left_factor_order"] < 81
    assert 9 < rep.detail["right_factor_order"] < 81


@given(algebras())
def test_green_relations_match_oracle(a):
    m = a.meet.tolist()
    assert sorted(relation_D(a).classes) == oracles.d_classes(a)
    r, l, d = relation_R(a), relation_L(a), relation_D(a)
    n = a.order
    for x, y in itertools.product(range(n), repeat=2):
        assert r.related(x, y) == oracles.r_related(m, x, y)
        assert l.related(x, y) == oracles.l_related(m, x, y)
        assert d.related(x, y) == any(x in c and y in c for c in oracles.d_classes(a))


@given(algebras())
def test_d_is_composite_of_r_and_l(a):
    r = relation_R(a).matrix().astype(int)
    l = relation_L(a).matrix().astype(int)
    d = relation_D(a).matrix()
    assert np.array_equal((r @ l) > 0, d)
    assert np.array_equal((l @ r) > 0, d)
    assert np.array_equal((r & l).astype(bool), np.eye(a.order, dtype=bool))


@given(algebras())
def test_preorder_matches_class_order(a):
    nat = natural_orders(a)
    cof = relation_D(a).class_of
    lat = lattice_image(a)
    for x, y in itertools.product(range(a.order), repeat=2):
        cx, cy = cof[x], cof[y]
        assert nat.preorder[x, y] == (lat.meet[cx, cy] == cy)
    assert {tuple(p) for p in np.argwhere(nat.partial_order)} == oracles.natural_ge(a)


@given(algebras())
def test_handed_preorder_laws(a):
    h = handedness(a)
    if h in ("left", "both"):
        for q in LEFT_PREORDER:
            assert check_quasi_identity(a, q)
        for ident in LEFT_LEMMA:
            assert holds(a, ident)
    if h in ("right", "both"):
        for q in RIGHT_PREORDER:
            assert check_quasi_identity(a, q)


def test_printed_left_preorder_join_fails_on_chain2():
    res = check_quasi_identity(chain(2), LEFT_PREORDER_JOIN_PRINTED)
    assert not res and res.witness == (1, 0, 0) and (res.lhs, res.rhs) == (1, 0)


@given(algebras())
def test_transpose_swaps_handedness(a):
    t = transpose_dual(a)
    assert is_left_handed(a) == is_right_handed(t)
    assert is_right_handed(a) == is_left_handed(t)


@given(algebras())
def test_decompositions(a):
    assert verify_first_decomposition(a).ok
    assert verify_second_decomposition(a).ok


def test_dot_exports(spinks9):
    d = dot_d_classes(spinks9)
    assert d.startswith("digraph")
    assert all(f"D{i} [" in d for i in range(6))
    n = dot_natural_order(spinks9)
    assert n.count("subgraph cluster_") == 6
    assert all(f"n{i} [" in n for i in range(9))
    # covering pairs only: 2 > 5 is drawn, 1 > 5 is not
    assert "n5 -> n2" in n and "n5 -> n1" not in n
