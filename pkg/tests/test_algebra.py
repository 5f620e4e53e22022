import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import algebras, pool
from skewlat.algebra import (BudgetExceeded, FiniteSkewLattice, InvalidAlgebraError, ParseError,
                             check_identity, check_quasi_identity, ensure_valid, evaluate_term,
                             format_algebra, holds, parse_algebra, validate)
from skewlat.corpus import builtin, chain, rectangular
from skewlat.identities import CANCEL, JOIN_DIST, MEET_DIST, SIMPLE_CANCEL
from skewlat.terms import Meet, Var, parse_identity, parse_term

CHAIN2 = "order 2\nmeet\n0 0\n0 1\njoin\n0 1\n1 1\n"


# -- parsing ---------------------------------------------------------------------------------------

def test_parse_chain2():
    a = parse_algebra(CHAIN2)
    assert a.order == 2
    assert a.meet.tolist() == [[0, 0], [0, 1]]
    assert a.join.tolist() == [[0, 1], [1, 1]]
    assert validate(a).ok


def test_parse_spinks_file(spinks9):
    a = parse_algebra(format_algebra(spinks9))
    assert a.order == 9 and a == spinks9


def test_out_of_range_entry_rejected():
    s = format_algebra(builtin("spinks9")).splitlines()
    i = s.index("meet") + 1
    row = s[i].split()
    row[0] = "9"
    s[i] = " ".join(row)
    with pytest.raises(ParseError, match="out of range"):
        parse_algebra("\n".join(s))


@pytest.mark.parametrize("text, fragment", [
    ("", "empty"),
    ("order x\n", "integer"),
    ("order 2\nmeet\n0 0\n", "rows"),
    ("order 2\nmeet\n0 0\n0 1\njoin\n0 1\n", "rows"),
    ("order 2\nmeet\n0 0 0\n0 1\njoin\n0 1\n1 1\n", "entries"),
    ("order 2\njoin\n0 1\n1 1\nmeet\n0 0\n0 1\n", "expected 'meet'"),
    (CHAIN2 + "extra\n", "unexpected"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_algebra(text)


def test_comments_and_labels_round_trip(u2):
    text = format_algebra(u2)
    assert text.startswith("# name: u2")
    back = parse_algebra(text)
    assert back.labels == u2.labels and back == u2
    assert format_algebra(back) == text


@given(algebras())
def test_format_parse_round_trip(a):
    assert parse_algebra(format_algebra(a)) == a


def test_table_shape_checks():
    with pytest.raises(ValueError):
        FiniteSkewLattice([[0, 0], [0, 1]], [[0]])
    with pytest.raises(ValueError):
        FiniteSkewLattice([[0, 2], [0, 1]], [[0, 1], [1, 1]])


# -- validation ------------------------------------------------------------------------------------

def test_spinks_validates_all_groups(spinks9):
    rep = validate(spinks9.meet, spinks9.join)
    assert rep.ok and all(rep.verdicts.values())


def test_min_min_breaks_absorption():
    t = [[0, 0], [0, 1]]
    rep = validate(t, t)
    assert rep.verdicts["idempotent"] and rep.verdicts["associative"]
    assert not rep.verdicts["absorption"]
    _, x, y = rep.witnesses["absorption"]
    assert (x, y) == (1, 0)
    # the same pair breaks x∨(x∧y)=x: 1∨(1∧0) = 0
    assert t[x][t[x][y]] != x


def test_random_nonassociative_table_witness():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = 4
        t = rng.integers(0, n, size=(n, n))
        np.fill_diagonal(t, np.arange(n))
        rep = validate(t, t)
        if rep.verdicts["associative"]:
            continue
        tag, x, y, z = rep.witnesses["associative"]
        assert tag == "meet"
        assert t[t[x, y], z] != t[x, t[y, z]]
        # lexicographically first
        for a, b, c in itertools.product(range(n), repeat=3):
            if (a, b, c) == (x, y, z):
                break
            assert t[t[a, b], c] == t[a, t[b, c]]
        return
    pytest.fail("no non-associative table drawn")


def test_validate_agrees_with_oracle_on_random_tables():
    rng = np.random.default_rng(11)
    for _ in range(300):
        n = int(rng.integers(1, 4))
        m = rng.integers(0, n, size=(n, n))
        j = rng.integers(0, n, size=(n, n))
        assert validate(m, j).ok == oracles.is_skew_lattice(m.tolist(), j.tolist())


def test_validate_agrees_with_oracle_on_pool():
    for a in pool():
        if a.order <= 12:
            assert oracles.is_skew_lattice(*oracles.tables(a))
        assert validate(a).ok


def test_ensure_valid_raises():
    t = [[0, 0], [0, 1]]
    with pytest.raises(InvalidAlgebraError):
        ensure_valid(FiniteSkewLattice(t, t))


@given(algebras())
def test_order_dualities(a):
    m, j = a.meet, a.join
    assert np.array_equal(m == np.arange(a.order)[:, None], j == np.arange(a.order)[None, :])
    assert np.array_equal(m == np.arange(a.order)[None, :], j == np.arange(a.order)[:, None])


@given(algebras(max_order=12))
def test_regularity(a):
    # x∘y∘x'∘z∘x = x∘y∘z∘x for both operations and every x' D-related to x
    assert validate(a).verdicts["regularity"]
    m, j = oracles.tables(a)
    for cls in oracles.d_classes(a):
        for x, x1 in itertools.product(cls, repeat=2):
            for t in (m, j):
                for y, z in itertools.product(range(a.order), repeat=2):
                    assert t[t[t[t[x][y]][x1]][z]][x] == t[t[t[x][y]][z]][x]


# -- evaluation and identities --------------------------------------------------------------------

def test_evaluate_idempotent():
    a = builtin("spinks9")
    t = Meet(Var(0), Var(0))
    for x in range(9):
        assert evaluate_term(a, t, [x]) == x


def test_evaluate_spinks_instance(spinks9):
    lhs, _ = parse_term("x & (y | z) & x")
    rhs, _ = parse_term("(x & y & x) | (x & z & x)")
    assert evaluate_term(spinks9, lhs, (2, 5, 8)) == 6
    assert evaluate_term(spinks9, rhs, (2, 5, 8)) == 5


def test_evaluate_too_few_values(spinks9):
    with pytest.raises(ValueError):
        evaluate_term(spinks9, MEET_DIST.lhs, (1, 2))


def test_meet_distributivity_on_chain_lattices():
    for n in (2, 3, 4):
        assert holds(chain(n), MEET_DIST)
        assert holds(chain(n), JOIN_DIST)


def test_spinks_sandwich_identities(spinks9):
    res = holds(spinks9, MEET_DIST)
    assert not res
    assert (res.lhs, res.rhs) == (6, 5)
    assert res.witness == oracles.identity_failures(spinks9, MEET_DIST)[0][0]
    fails = {f[0] for f in oracles.identity_failures(spinks9, MEET_DIST)}
    assert (2, 5, 8) in fails
    assert holds(spinks9, JOIN_DIST)


def test_simple_cancellation_on_rectangles():
    for r, c in ((1, 2), (2, 1), (2, 2), (3, 2)):
        a = rectangular(r, c)
        res = check_quasi_identity(a, SIMPLE_CANCEL)
        assert bool(res) == (not oracles.quasi_failures(a, SIMPLE_CANCEL))
        assert res


def test_cancellation_on_lattices(m3):
    for n in (2, 3, 4):
        for q in CANCEL:
            assert check_quasi_identity(chain(n), q)
    res = check_quasi_identity(m3, CANCEL[0])
    assert not res
    x, y, z = res.witness
    atoms = {x, y, z}
    assert len({y, z}) == 2
    assert m3.j(x, y) == m3.j(x, z) and m3.m(x, y) == m3.m(x, z)
    assert atoms == {1, 2, 3}


def test_budget_guard(spinks9):
    with pytest.raises(BudgetExceeded):
        holds(spinks9, MEET_DIST, budget=100)


@given(algebras(max_order=9), st.sampled_from([
    "x & y & x = x & y", "x | (y & z) | x = (x | y | x) & (x | z | x)",
    "x & (y | z) = (x & y) | (x & z)", "x & y & z = x & z & y", "(x | y) & x = x"]))
def test_check_identity_matches_oracle(a, text):
    ident = parse_identity(text)
    res = check_identity(a, ident.lhs, ident.rhs)
    fails = oracles.identity_failures(a, ident)
    assert bool(res) == (not fails)
    if fails:
        w, lhs, rhs = fails[0]
        assert res.witness == w and (res.lhs, res.rhs) == (lhs, rhs)
        # symmetric in the two sides
        swapped = check_identity(a, ident.rhs, ident.lhs)
        assert swapped.witness == w and (swapped.lhs, swapped.rhs) == (rhs, lhs)


@given(algebras(max_order=9))
def test_evaluation_deterministic(a):
    r1 = holds(a, MEET_DIST)
    r2 = holds(a, MEET_DIST)
    assert r1 == r2
