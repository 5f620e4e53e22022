import itertools
import json

import pytest

import oracles
from skewlat.algebra import holds, validate
from skewlat.canonical import canonical_form, find_isomorphism
from skewlat.corpus import builtin, chain
from skewlat.green import handedness, lattice_image, relation_D
from skewlat.identities import NORMAL
from skewlat.properties import PropertyId, check
from skewlat.search import (SearchConstraint, SearchError, bands, chain_lattice, enumerate_models,
                            find_counterexample, iter_models, lattices, oracle_enumerate,
                            parse_constraint, skeletons, write_results)

P = PropertyId


# -- lattice generation --------------------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_lattice_counts_match_brute_force(k):
    assert len(lattices(k)) == oracles.lattice_count(k)


def test_lattice_counts_known_values():
    assert [len(lattices(k)) for k in range(1, 10)] == [1, 1, 1, 2, 5, 15, 53, 222, 1078]
    dist = [sum(l.is_distributive() for l in lattices(k)) for k in range(1, 10)]
    assert dist == [1, 1, 1, 2, 3, 5, 8, 15, 26]


def test_generated_lattices_are_lattices_and_distinct():
    for k in range(1, 7):
        forms = set()
        for lat in lattices(k):
            alg = lat.algebra()
            assert validate(alg).ok and handedness(alg) == "both"
            forms.add(canonical_form(alg))
        assert len(forms) == len(lattices(k))


def test_chain_lattice():
    c = chain_lattice(4)
    assert c.is_chain() and c.size == 4


# -- brute-force oracle ---------------------------------------------------------------------------

def test_bands_of_order_2():
    # left-zero, right-zero, both semilattice orders
    assert len(bands(2)) == 4


@pytest.mark.parametrize("n, count", [(1, 1), (2, 3), (3, 7)])
def test_oracle_counts(n, count):
    brute = oracle_enumerate(n)
    enum = enumerate_models(SearchConstraint(n), timeout=None).hits
    assert len(brute) == len(enum) == count
    assert {canonical_form(a) for a in brute} == {canonical_form(a) for a in enum}


def test_oracle_order_4():
    brute = {canonical_form(a) for a in oracle_enumerate(4)}
    enum = {canonical_form(a) for a in enumerate_models(SearchConstraint(4), timeout=None).hits}
    assert brute == enum and len(enum) == 21


def test_order_two_classes():
    hits = enumerate_models(SearchConstraint(2), timeout=None).hits
    kinds = sorted((handedness(a), lattice_image(a).order) for a in hits)
    assert kinds == [("both", 2), ("left", 1), ("right", 1)]


# -- constraints ---------------------------------------------------------------------------------

def test_constraint_validation():
    with pytest.raises(SearchError):
        SearchConstraint(5, ["normal"], ["normal"])
    with pytest.raises(SearchError):
        SearchConstraint(5, chain_shape=(2, 2))
    with pytest.raises(SearchError):
        SearchConstraint(13)
    SearchConstraint(13, handedness="left")
    with pytest.raises((SearchError, ValueError)):
        parse_constraint("not_a_property")
    q = parse_constraint("x & y = y & x => x | y = y | x")
    assert q.variable_count == 2


def test_skeleton_counts_are_isomorphism_classes():
    sk = skeletons(SearchConstraint(3))
    assert len(sk) == 7


# -- emitted models ---------------------------------------------------------------------------------

CASES = [
    SearchConstraint(5),
    SearchConstraint(6, handedness="left"),
    SearchConstraint(6, ["categorical"], ["distributive"]),
    SearchConstraint(6, [], ["quasi_distributive"]),
    SearchConstraint(7, ["normal"], ["symmetric"], "right"),
    SearchConstraint(6, ["x & y & z & x = x & z & y & x"]),
]


@pytest.mark.parametrize("c", CASES, ids=lambda c: json.dumps(c.to_json()))
def test_emitted_models_satisfy_constraints(c):
    res = enumerate_models(c, limit=40, timeout=300)
    assert res.hits
    for a in res.hits:
        assert validate(a).ok
        if c.handedness:
            assert handedness(a) in (c.handedness, "both")
        for p in c.require:
            if isinstance(p, PropertyId):
                assert check(a, p).verdict
            else:
                assert holds(a, p)
        for p in c.forbid:
            assert not check(a, p).verdict
    for a, b in itertools.combinations(res.hits, 2):
        assert find_isomorphism(a, b) is None


def test_chain_shape_respected():
    c = SearchConstraint(6, handedness="left", chain_shape=(2, 2, 2))
    hits = enumerate_models(c, timeout=None).hits
    assert hits
    for a in hits:
        assert sorted(len(k) for k in relation_D(a).classes) == [2, 2, 2]
        assert lattice_image(a).order == 3


def test_left_handed_counts_are_stable():
    counts = [len(enumerate_models(SearchConstraint(n, handedness="left"), timeout=None).hits)
              for n in range(2, 6)]
    all_hits = {n: enumerate_models(SearchConstraint(n), timeout=None).hits for n in range(2, 5)}
    for n in range(2, 5):
        assert counts[n - 2] == sum(handedness(a) in ("left", "both") for a in all_hits[n])


def test_u2_found_by_chain_search():
    c = SearchConstraint(12, ["categorical"], ["linearly_distributive"], "left", (2, 8, 2))
    res = enumerate_models(c, timeout=600)
    assert res.exhausted
    assert canonical_form(builtin("u2")) in {canonical_form(h) for h in res.hits}


def test_spinks_found_by_handed_search():
    c = SearchConstraint(9, ["join_distributive"], ["meet_distributive"], "left")
    res = enumerate_models(c, timeout=600)
    assert res.exhausted
    assert [canonical_form(h) for h in res.hits] == [canonical_form(builtin("spinks9"))]


def test_counterexample_immediate_hit():
    res = find_counterexample(["distributive"], [], [3], chain_shapes=[(1, 1, 1)])
    assert res.hit is not None and find_isomorphism(res.hit, chain(3)) is not None


def test_counterexample_exhausted_below_nine():
    res = find_counterexample(["quasi_distributive", "linearly_distributive"], ["distributive"],
                              range(2, 9))
    assert res.hit is None and res.exhausted
    assert [n for n, _ in res.per_order] == list(range(2, 9))


def test_categorical_chains_exhausted_below_twelve():
    shapes = [(2, b, 2) for b in range(1, 8)]
    res = find_counterexample(["categorical"], ["linearly_distributive"], None,
                              handedness="left", chain_shapes=shapes)
    assert res.hit is None and res.exhausted


def test_timeout_truncates():
    res = enumerate_models(SearchConstraint(9, handedness="left"), timeout=0.5)
    assert res.status == "truncated" and not res.exhausted


def test_limit_truncates():
    res = enumerate_models(SearchConstraint(6), limit=5, timeout=None)
    assert len(res.hits) == 5 and res.status == "truncated"


def test_iter_models_streams():
    it = iter_models(SearchConstraint(4))
    first = next(it)
    assert validate(first).ok


def test_write_results(tmp_path):
    res = enumerate_models(SearchConstraint(3), timeout=None)
    path = write_results(res, tmp_path)
    man = json.loads(path.read_text())
    assert man["status"] == "exhausted" and len(man["hits"]) == 7
    assert set(man) >= {"constraints", "scope", "status", "hits"}
    from skewlat.algebra import load_algebra
    for f in man["hits"]:
        assert validate(load_algebra(tmp_path / f)).ok


def test_parallel_workers_match_single():
    c = SearchConstraint(7, handedness="left")
    one = {canonical_form(a) for a in enumerate_models(c, timeout=None).hits}
    many = {canonical_form(a) for a in enumerate_models(c, timeout=None, workers=2).hits}
    assert one == many and one


def test_identity_constraint_search():
    hits = enumerate_models(SearchConstraint(5, [NORMAL]), timeout=None).hits
    assert hits and all(holds(a, NORMAL) for a in hits)
    assert {canonical_form(a) for a in hits} == {
        canonical_form(a) for a in enumerate_models(SearchConstraint(5, ["normal"]), timeout=None).hits}
