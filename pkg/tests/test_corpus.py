import pytest
from hypothesis import given

from conftest import algebras
from skewlat.algebra import parse_algebra, validate
from skewlat.corpus import (UnknownAlgebra, builtin, builtin_names, chain, corpus, direct_product,
                            emit, op_dual, rectangular, transpose_dual)
from skewlat.green import handedness, natural_orders, relation_D
from skewlat.properties import PropertyId, check

P = PropertyId
NAMES = ["m3", "n5", "spinks9", "spinks9_rh", "u2", "v2", "chain2", "chain3", "rect(2,3)"]


@pytest.mark.parametrize("name", NAMES)
def test_builtins_validate(name):
    assert validate(builtin(name)).ok


def test_unknown_name():
    with pytest.raises(UnknownAlgebra):
        builtin("nope")
    assert "spinks9" in builtin_names()


def test_spinks_table_entries(spinks9):
    assert spinks9.m(2, 3) == 5
    assert spinks9.j(7, 2) == 1
    assert handedness(spinks9) == "left"


def test_u2_entry(u2):
    assert u2.order == 12 and handedness(u2) == "left"
    assert u2.label(u2.m("a1", u2.j("b2", "c2"))) == "d1"
    assert u2.label(u2.j("b2", "c2")) == "d2"


def test_v2_is_right_handed(v2):
    assert handedness(v2) == "right"
    assert check(v2, P.CATEGORICAL).verdict
    assert not check(v2, P.LINEARLY_DISTRIBUTIVE).verdict


def test_m3_atoms(m3):
    bottom = next(x for x in range(5) if all(m3.m(x, y) == x for y in range(5)))
    top = next(x for x in range(5) if all(m3.j(x, y) == x for y in range(5)))
    atoms = [x for x in range(5) if x not in (bottom, top)]
    assert len(atoms) == 3
    for a in atoms:
        assert m3.j(bottom, a) == a
        assert all(m3.j(a, b) == top and m3.m(a, b) == bottom for b in atoms if b != a)


def test_rectangular_shape():
    r = rectangular(2, 3)
    assert r.order == 6 and len(relation_D(r).classes) == 1


@given(algebras())
def test_op_dual_involution(a):
    assert op_dual(op_dual(a)) == a
    assert transpose_dual(transpose_dual(a)) == a
    assert validate(op_dual(a)).ok and validate(transpose_dual(a)).ok


@given(algebras())
def test_duals_preserve_class_lattice(a):
    n = len(relation_D(a).classes)
    for d in (op_dual(a), transpose_dual(a)):
        assert len(relation_D(d).classes) == n
    assert check(a, P.MEET_DISTRIBUTIVE).verdict == check(op_dual(a), P.JOIN_DISTRIBUTIVE).verdict
    flip = {"left": "right", "right": "left", "both": "both", None: None}
    assert handedness(transpose_dual(a)) == flip[handedness(a)]


def test_transpose_of_spinks_is_right_handed(spinks9):
    t = transpose_dual(spinks9)
    assert handedness(t) == "right"
    assert t == builtin("spinks9_rh")


def test_product_fails_both_sandwich_identities(spinks9):
    partner = transpose_dual(op_dual(spinks9))
    assert check(partner, P.MEET_DISTRIBUTIVE).verdict
    assert not check(partner, P.JOIN_DISTRIBUTIVE).verdict
    prod = direct_product(spinks9, partner)
    assert prod.order == 81 and validate(prod).ok
    assert not check(prod, P.MEET_DISTRIBUTIVE).verdict
    assert not check(prod, P.JOIN_DISTRIBUTIVE).verdict
    assert check(prod, P.LINEARLY_DISTRIBUTIVE).verdict
    assert check(prod, P.QUASI_DISTRIBUTIVE).verdict


def test_product_orders():
    p = direct_product(chain(2), chain(3))
    assert p.order == 6 and check(p, P.DISTRIBUTIVE).verdict
    assert natural_orders(p).class_order.sum() == 18


@pytest.mark.parametrize("name", NAMES)
def test_emit_round_trip(name):
    a = builtin(name)
    b = parse_algebra(emit(name))
    assert b == a
    assert emit(name) == emit(name)


def test_corpus_members_validate():
    algs = corpus()
    assert len({a.name for a in algs}) == len(algs)
    assert all(validate(a).ok for a in algs)


def test_corpus_dir_override(tmp_path, monkeypatch, spinks9):
    text = emit("spinks9")
    (tmp_path / "spinks9.skt").write_text(text)
    monkeypatch.setenv("SKEWLAT_CORPUS_DIR", str(tmp_path))
    assert builtin("spinks9") == spinks9
    lines = text.splitlines()
    # corrupt one table row so the override is visibly used and rejected
    idx = next(i for i, l in enumerate(lines) if l.strip() and l.split()[0].isdigit())
    parts = lines[idx].split()
    parts[-1] = "0" if parts[-1] != "0" else "1"
    lines[idx] = " ".join(parts)
    (tmp_path / "spinks9.skt").write_text("\n".join(lines) + "\n")
    with pytest.raises(Exception):
        builtin("spinks9")
