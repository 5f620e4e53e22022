import pytest
from hypothesis import given

import oracles
from conftest import algebras, pool
from skewlat.algebra import evaluate_term
from skewlat.corpus import builtin, chain, direct_product, op_dual, rectangular, transpose_dual
from skewlat.green import lattice_image
from skewlat.identities import (CANCEL, CATEGORICAL_Q, EMCC, EMCC_LEFT, JOIN_DIST,
                                LINEAR_RIGHT_MIRROR, LINEAR_RIGHT_PRINTED, MEET_DIST, NORMAL,
                                SIMPLE_CANCEL)
from skewlat.properties import (PropertyId, check, full_report, implications, is_skew_diamond,
                                report_json, verdicts)

P = PropertyId


def small():
    return [a for a in pool() if a.order <= 9]


# -- named examples -----------------------------------------------------------------------------------

def test_spinks_profile(spinks9):
    assert check(spinks9, P.JOIN_DISTRIBUTIVE).verdict
    md = check(spinks9, P.MEET_DISTRIBUTIVE)
    assert not md.verdict and md.method_agreement
    assert (md.witness.lhs, md.witness.rhs) == (6, 5)
    assert check(spinks9, P.LINEARLY_DISTRIBUTIVE).verdict
    assert check(spinks9, P.QUASI_DISTRIBUTIVE).verdict
    assert not check(spinks9, P.DISTRIBUTIVE).verdict
    us = check(spinks9, P.UPPER_SYMMETRIC)
    assert not us.verdict
    assert spinks9.m(5, 8) == spinks9.m(8, 5) == 0
    assert (spinks9.j(5, 8), spinks9.j(8, 5)) == (4, 3)
    em = check(spinks9, P.EMCC)
    assert not em.verdict
    assert evaluate_term(spinks9, EMCC_LEFT.lhs, (2, 8, 5)) == 5
    assert evaluate_term(spinks9, EMCC_LEFT.rhs, (2, 8, 5)) == 6


def test_m3_profile(m3):
    assert not check(m3, P.QUASI_DISTRIBUTIVE).verdict
    assert check(m3, P.LINEARLY_DISTRIBUTIVE).verdict
    # the sandwich identities fail on exactly the same triples, so the biconditional holds
    md = {w for w, _, _ in oracles.identity_failures(m3, MEET_DIST)}
    jd = {w for w, _, _ in oracles.identity_failures(m3, JOIN_DIST)}
    assert md == jd and md
    assert check(m3, P.BICONDITIONALLY_DISTRIBUTIVE).verdict


def test_n5_not_biconditional(n5):
    md = {w for w, _, _ in oracles.identity_failures(n5, MEET_DIST)}
    jd = {w for w, _, _ in oracles.identity_failures(n5, JOIN_DIST)}
    assert md != jd
    assert not check(n5, P.BICONDITIONALLY_DISTRIBUTIVE).verdict
    assert check(n5, P.RELATIVELY_DISTRIBUTIVE).verdict


def test_u2_profile(u2):
    assert check(u2, P.CATEGORICAL).verdict
    ld = check(u2, P.LINEARLY_DISTRIBUTIVE)
    assert not ld.verdict and ld.method_agreement
    lhs = u2.m("a1", u2.j("b2", "c2"))
    rhs = u2.j(u2.m("a1", "b2"), u2.m("a1", "c2"))
    assert (u2.label(lhs), u2.label(rhs)) == ("d1", "d3")


def test_distributive_lattices_have_every_property():
    for a in (chain(2), chain(3), chain(4), direct_product(chain(2), chain(3))):
        assert all(r.verdict for r in full_report(a)), a.name


def test_normal_algebras_are_strictly_categorical():
    normal = [a for a in pool() if check(a, P.NORMAL).verdict]
    assert len(normal) > 5
    assert any(a.name.startswith("rect") for a in normal)
    for a in normal:
        assert check(a, P.STRICTLY_CATEGORICAL).verdict


def test_printed_right_linear_identity_fails_on_chain2():
    from skewlat.algebra import holds
    res = holds(chain(2), LINEAR_RIGHT_PRINTED)
    assert not res
    assert (res.witness, res.lhs, res.rhs) == ((0, 1, 1), 1, 0)
    assert holds(chain(2), LINEAR_RIGHT_MIRROR)


def test_parse_property_names():
    assert PropertyId.parse("QD") is P.QUASI_DISTRIBUTIVE
    assert PropertyId.parse("linearly-distributive") is P.LINEARLY_DISTRIBUTIVE
    with pytest.raises(ValueError):
        PropertyId.parse("nonsense")


def test_report_json_shape(spinks9):
    rep = report_json(spinks9)
    assert rep["order"] == 9 and len(rep["properties"]) == len(PropertyId)
    md = next(p for p in rep["properties"] if p["id"] == "meet_distributive")
    assert md["verdict"] is False and md["methods"] and md["witness"]["lhs"] == "6"


def test_omitted_methods_are_reported():
    big = direct_product(builtin("spinks9"), transpose_dual(op_dual(builtin("spinks9"))))
    rep = check(big, P.LINEARLY_DISTRIBUTIVE)
    assert rep.omitted and rep.method_agreement


# -- oracle cross-checks ----------------------------------------------------------------------------

def _identity_oracle(a, ident):
    return not oracles.identity_failures(a, ident)


def _quasi_oracle(a, q):
    return not oracles.quasi_failures(a, q)


def _symmetric_oracle(a):
    m, j = oracles.tables(a)
    n = a.order
    return all((m[x][y] == m[y][x]) == (j[x][y] == j[y][x]) for x in range(n) for y in range(n))


def _qd_oracle(a):
    lat = lattice_image(a)
    m3, n5 = builtin("m3"), builtin("n5")
    for s in oracles.subalgebras(lat):
        if len(s) == 5:
            sub = lat.restrict(s)
            if oracles.isomorphic(sub, m3) or oracles.isomorphic(sub, n5):
                return False
    return True


@pytest.mark.parametrize("prop, oracle", [
    (P.MEET_DISTRIBUTIVE, lambda a: _identity_oracle(a, MEET_DIST)),
    (P.JOIN_DISTRIBUTIVE, lambda a: _identity_oracle(a, JOIN_DIST)),
    (P.SYMMETRIC, _symmetric_oracle),
    (P.CANCELLATIVE, lambda a: all(_quasi_oracle(a, q) for q in CANCEL)),
    (P.SIMPLY_CANCELLATIVE, lambda a: _quasi_oracle(a, SIMPLE_CANCEL)),
    (P.QUASI_DISTRIBUTIVE, _qd_oracle),
    (P.CATEGORICAL, lambda a: _quasi_oracle(a, CATEGORICAL_Q)),
    (P.NORMAL, lambda a: _identity_oracle(a, NORMAL)),
    (P.EMCC, lambda a: _identity_oracle(a, EMCC)),
], ids=lambda v: v.value if isinstance(v, PropertyId) else "")
def test_verdicts_match_plain_oracle(prop, oracle):
    for a in small():
        if a.order > 6 and prop in (P.NORMAL, P.CATEGORICAL, P.CANCELLATIVE):
            continue
        assert check(a, prop).verdict == oracle(a), a.name


def test_biconditional_matches_oracle():
    for a in small():
        if a.order > 7:
            continue
        md = {w for w, _, _ in oracles.identity_failures(a, MEET_DIST)}
        jd = {w for w, _, _ in oracles.identity_failures(a, JOIN_DIST)}
        assert check(a, P.BICONDITIONALLY_DISTRIBUTIVE).verdict == (md == jd), a.name


def test_witnesses_re_evaluate():
    for a in small():
        for rep in full_report(a):
            if rep.verdict or rep.witness is None or rep.witness.lhs is None:
                continue
            assert rep.witness.lhs != rep.witness.rhs


# -- invariants ------------------------------------------------------------------------------------

def test_method_agreement_on_pool():
    for a in pool():
        for rep in full_report(a):
            assert rep.method_agreement, (a.name, rep.property, rep.methods)


def test_implications_on_pool():
    for a in pool():
        bad = [n for n, ok in implications(verdicts(a), a) if not ok]
        assert not bad, (a.name, bad)


@given(algebras())
def test_implications_and_agreement(a):
    reps = full_report(a)
    assert all(r.method_agreement for r in reps)
    v = {r.property: r.verdict for r in reps}
    assert all(ok for _, ok in implications(v, a))


@given(algebras())
def test_duality(a):
    d = op_dual(a)
    assert check(a, P.MEET_DISTRIBUTIVE).verdict == check(d, P.JOIN_DISTRIBUTIVE).verdict
    assert check(a, P.EMCC).verdict == check(d, P.EJCC).verdict
    t = transpose_dual(a)
    for p in (P.DISTRIBUTIVE, P.QUASI_DISTRIBUTIVE, P.LINEARLY_DISTRIBUTIVE, P.SYMMETRIC,
              P.CATEGORICAL, P.NORMAL):
        assert check(a, p).verdict == check(t, p).verdict


def test_skew_diamond_detection():
    d = direct_product(chain(2), chain(2))
    assert is_skew_diamond(d)
    assert not is_skew_diamond(chain(4))
    r = direct_product(d, rectangular(2, 1))
    assert is_skew_diamond(r)
    assert check(r, P.DISTRIBUTIVE).verdict == check(r, P.LINEARLY_DISTRIBUTIVE).verdict


def test_every_property_has_two_methods_somewhere():
    a = builtin("spinks9")
    for p in PropertyId:
        rep = check(a, p)
        assert rep.methods
        if p not in (P.RELATIVELY_DISTRIBUTIVE,):
            assert len(rep.methods) >= 2, p


def test_budget_annotation():
    rep = check(builtin("u2"), P.NORMAL, budget=10)
    assert rep.omitted
    assert rep.method_agreement
