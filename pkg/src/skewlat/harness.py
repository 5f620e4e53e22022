"""Acceptance suite: one function per criterion, each returning a CriterionResult."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import FiniteSkewLattice, evaluate_term, holds, validate
from .canonical import canonical_form, find_isomorphism
from .corpus import builtin, corpus, op_dual, transpose_dual
from .cosets import ac_components, chain_conditions, midpoints, skew_chains, verify_factorization
from .green import handedness, lattice_image, verify_first_decomposition, verify_second_decomposition
from .identities import EMCC_LEFT, JOIN_DIST, MEET_DIST
from .properties import PropertyId, check, implications, verdicts
from .search import SearchConstraint, enumerate_models, oracle_enumerate
from .subalgebras import find_embedding

P = PropertyId
SEARCH_TIMEOUT = 3600.0


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool = True
    checks: list[tuple[str, bool]] = field(default_factory=list)
    seconds: float = 0.0
    limit: float | None = None

    def add(self, name: str, ok) -> bool:
        ok = bool(ok)
        self.checks.append((name, ok))
        self.passed &= ok
        return ok

    @property
    def failures(self) -> list[str]:
        return [n for n, ok in self.checks if not ok]

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"; failed: {', '.join(self.failures[:5])}" if not self.passed else ""
        return (f"[{status}] {self.number:2d}. {self.title} "
                f"({len(self.checks)} checks, {self.seconds:.1f}s){extra}")

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "seconds": round(self.seconds, 3), "failures": self.failures,
                "checks": len(self.checks)}


def _timed(number, title, limit=None):
    def deco(fn):
        def run() -> CriterionResult:
            res = CriterionResult(number, title, limit=limit)
            start = time.perf_counter()
            fn(res)
            res.seconds = time.perf_counter() - start
            if limit is not None:
                res.add(f"runtime ≤ {limit:g}s", res.seconds <= limit)
            return res
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return deco


def _fresh(alg: FiniteSkewLattice) -> FiniteSkewLattice:
    """Copy without cached analysis, so timings include all work."""
    return FiniteSkewLattice(alg.meet, alg.join, alg.name, alg.labels)


@lru_cache(maxsize=None)
def enumerated_algebras() -> tuple[FiniteSkewLattice, ...]:
    """Unconstrained enumeration at orders 2-4 and left-handed enumeration at orders 2-5."""
    found = {}
    for n in (2, 3, 4):
        for a in enumerate_models(SearchConstraint(n), timeout=None).hits:
            found.setdefault(canonical_form(a), a)
    for n in (2, 3, 4, 5):
        for a in enumerate_models(SearchConstraint(n, handedness="left"), timeout=None).hits:
            found.setdefault(canonical_form(a), a)
    out = []
    for i, k in enumerate(sorted(found)):
        a = found[k]
        out.append(FiniteSkewLattice(a.meet, a.join, f"enum{a.order}_{i}"))
    return tuple(out)


MIXED_SEARCHES = (
    (SearchConstraint(6), 45),
    (SearchConstraint(7), 40),
    (SearchConstraint(8, handedness="left"), 40),
    (SearchConstraint(7, ["categorical"], ["distributive"], "left"), 40),
    (SearchConstraint(8, ["linearly_distributive"], [], "right"), 40),
    (SearchConstraint(8, ["quasi_distributive"], ["linearly_distributive"], "left"), 20),
    (SearchConstraint(6, [], ["quasi_distributive"]), 20),
    (SearchConstraint(7, ["normal"]), 20),
)


@lru_cache(maxsize=None)
def search_hits(total: int = 200) -> tuple[FiniteSkewLattice, ...]:
    """At least ``total`` distinct algebras from model searches with mixed constraints."""
    found = {}
    for k, (constraint, limit) in enumerate(MIXED_SEARCHES):
        for a in enumerate_models(constraint, limit=limit, timeout=SEARCH_TIMEOUT).hits:
            found.setdefault(canonical_form(a), FiniteSkewLattice(a.meet, a.join, f"s{k}_{a.name}"))
    return tuple(found[k] for k in sorted(found))


def _test_algebras():
    return list(corpus()) + list(enumerated_algebras())


# -- criteria ----------------------------------------------------------------------------------------

@_timed(1, "Spinks 9 profile", limit=1.0)
def criterion_1(res: CriterionResult):
    s = _fresh(builtin("spinks9"))
    res.add("validates", validate(s.meet, s.join).ok)
    res.add("left-handed", handedness(s) == "left")
    res.add("join distributive over all triples", holds(s, JOIN_DIST))
    md = holds(s, MEET_DIST)
    res.add("meet distributivity fails", not md)
    res.add("reported witness evaluates to lhs=6 rhs=5", md.lhs == 6 and md.rhs == 5)
    res.add("instance (2,5,8) gives 6 vs 5",
            (evaluate_term(s, MEET_DIST.lhs, (2, 5, 8)), evaluate_term(s, MEET_DIST.rhs, (2, 5, 8)))
            == (6, 5))
    us = check(s, P.UPPER_SYMMETRIC)
    res.add("not upper symmetric", not us.verdict and us.method_agreement)
    res.add("witness (5,8): meets commute, joins 4 vs 3",
            s.m(5, 8) == s.m(8, 5) and (s.j(5, 8), s.j(8, 5)) == (4, 3))
    em = check(s, P.EMCC)
    res.add("emcc fails by every method", not em.verdict and em.method_agreement)
    left = em.method("left-handed emcc identity").result
    res.add("left-handed emcc witness values are {5, 6}", {left.lhs, left.rhs} == {5, 6})
    res.add("instance (2,8,5) gives 5 vs 6",
            (evaluate_term(s, EMCC_LEFT.lhs, (2, 8, 5)), evaluate_term(s, EMCC_LEFT.rhs, (2, 8, 5)))
            == (5, 6))
    ld = check(s, P.LINEARLY_DISTRIBUTIVE)
    res.add("linearly distributive by all methods", ld.verdict and ld.method_agreement
            and len(ld.methods) >= 4)
    qd = check(s, P.QUASI_DISTRIBUTIVE)
    res.add("quasi-distributive by all methods", qd.verdict and qd.method_agreement)


@_timed(2, "U2/V2 skew chains", limit=1.0)
def criterion_2(res: CriterionResult):
    for name, hand in (("u2", "left"), ("v2", "right")):
        a = _fresh(builtin(name))
        res.add(f"{name} validates", validate(a.meet, a.join).ok)
        res.add(f"{name} has 12 elements", a.order == 12)
        res.add(f"{name} is {hand}-handed", handedness(a) == hand)
        res.add(f"{name} lattice image is a 3-chain", lattice_image(a).order == 3
                and len(skew_chains(a)) == 1)
        cat = check(a, P.CATEGORICAL)
        res.add(f"{name} categorical", cat.verdict and cat.method("categorical quasi-identity").verdict)
        res.add(f"{name} not linearly distributive", not check(a, P.LINEARLY_DISTRIBUTIVE).verdict)
        chain = skew_chains(a)[0]
        res.add(f"{name} middle class is one component", len(ac_components(chain).components) == 1)
        res.add(f"{name} |mu(a1,c1)| >= 2",
                len(midpoints(chain, a.index("a1"), a.index("c1"))) >= 2)
    u = builtin("u2")
    lhs = u.m("a1", u.j("b2", "c2"))
    rhs = u.j(u.m("a1", "b2"), u.m("a1", "c2"))
    res.add("a1∧(b2∨c2) = d1", u.label(lhs) == "d1")
    res.add("(a1∧b2)∨(a1∧c2) = d3", u.label(rhs) == "d3")


LD_METHODS = ("linear meet identity", "linear join identity", "six-identity family",
              "totally preordered subalgebras")


@_timed(3, "linear distributivity methods agree", limit=600.0)
def criterion_3(res: CriterionResult):
    for a in _test_algebras():
        rep = check(a, P.LINEARLY_DISTRIBUTIVE)
        names = set(rep.methods_used)
        need = set(LD_METHODS) if a.order <= 12 else set(LD_METHODS[:3])
        res.add(f"{a.name}: methods present", need <= names)
        res.add(f"{a.name}: agreement", rep.method_agreement)


def _chain_algebras():
    out = _test_algebras()
    for shape in ((2, 1, 2), (2, 2, 2), (1, 4, 1)):
        c = SearchConstraint(sum(shape), handedness="left", chain_shape=shape)
        out.extend(enumerate_models(c, timeout=SEARCH_TIMEOUT).hits)
    return out


@_timed(4, "skew chain conditions agree; unique factorization", limit=600.0)
def criterion_4(res: CriterionResult):
    for a in _chain_algebras():
        for ch in skew_chains(a):
            cond = chain_conditions(ch)
            res.add(f"{a.name} {ch!r}: conditions agree", cond.agree)
            if cond.distributive:
                res.add(f"{a.name} {ch!r}: unique factorization", verify_factorization(ch).ok)


@_timed(5, "implication suite", limit=900.0)
def criterion_5(res: CriterionResult):
    hits = search_hits()
    res.add("at least 200 model-search hits", len(hits) >= 200)
    for a in _test_algebras() + list(hits):
        v = verdicts(a)
        for name, ok in implications(v, a):
            res.add(f"{a.name}: {name}", ok)


@_timed(6, "forbidden subalgebras", limit=600.0)
def criterion_6(res: CriterionResult):
    m3, n5 = builtin("m3"), builtin("n5")
    for pat in (m3, n5):
        res.add(f"{pat.name} embeds in itself", find_embedding(pat, pat) is not None)
        res.add(f"{pat.name} not quasi-distributive", not check(pat, P.QUASI_DISTRIBUTIVE).verdict)
    for a in _test_algebras() + list(search_hits()):
        free = find_embedding(a, m3) is None and find_embedding(a, n5) is None
        res.add(f"{a.name}: QD iff no M3/N5", free == check(a, P.QUASI_DISTRIBUTIVE).verdict)


@_timed(7, "minimality searches", limit=7200.0)
def criterion_7(res: CriterionResult):
    spinks = canonical_form(builtin("spinks9"))
    for n in range(2, 10):
        r = enumerate_models(SearchConstraint(n, ["quasi_distributive", "linearly_distributive"],
                                              ["distributive"], "left"), timeout=SEARCH_TIMEOUT)
        res.add(f"QD+LD-D order {n}: exhausted", r.exhausted)
        if n <= 8:
            res.add(f"QD+LD-D order {n}: no hit", not r.hits)
        else:
            res.add("QD+LD-D order 9: a hit isomorphic to Spinks 9",
                    any(canonical_form(h) == spinks for h in r.hits))
    u2 = canonical_form(builtin("u2"))
    for b in range(1, 9):
        r = enumerate_models(SearchConstraint(4 + b, ["categorical"], ["linearly_distributive"],
                                              "left", (2, b, 2)), timeout=SEARCH_TIMEOUT)
        res.add(f"chain 2,{b},2: exhausted", r.exhausted)
        if b <= 7:
            res.add(f"chain 2,{b},2: no hit", not r.hits)
        else:
            res.add("chain 2,8,2: a hit isomorphic to U2", any(canonical_form(h) == u2 for h in r.hits))


@_timed(8, "enumeration oracle", limit=300.0)
def criterion_8(res: CriterionResult):
    for n in (2, 3):
        brute = {canonical_form(a) for a in oracle_enumerate(n)}
        enum = [canonical_form(a) for a in enumerate_models(SearchConstraint(n), timeout=None).hits]
        res.add(f"order {n}: counts match ({len(enum)} vs {len(brute)})", len(enum) == len(brute))
        res.add(f"order {n}: same isomorphism classes", set(enum) == brute)
    algs = [a for a in enumerated_algebras() if a.order <= 4]
    rng = np.random.default_rng(0)
    for i, a in enumerate(algs):
        b = a.relabel(rng.permutation(a.order))
        res.add(f"{a.name}: relabelled copy", canonical_form(a) == canonical_form(b)
                and find_isomorphism(a, b) is not None)
        for c in algs[i + 1:]:
            if c.order == a.order:
                same = canonical_form(a) == canonical_form(c)
                res.add(f"{a.name} vs {c.name}", same == (find_isomorphism(a, c) is not None))


@_timed(9, "decomposition theorems", limit=600.0)
def criterion_9(res: CriterionResult):
    for a in _test_algebras():
        res.add(f"{a.name}: first decomposition", verify_first_decomposition(a).ok)
        res.add(f"{a.name}: second decomposition", verify_second_decomposition(a).ok)


_SWAP = {"left": "right", "right": "left", "both": "both", None: None}


@_timed(10, "duality coherence", limit=600.0)
def criterion_10(res: CriterionResult):
    for a in _test_algebras():
        d = op_dual(a)
        res.add(f"{a.name}: meet/join distributivity swap",
                check(a, P.MEET_DISTRIBUTIVE).verdict == check(d, P.JOIN_DISTRIBUTIVE).verdict
                and check(a, P.JOIN_DISTRIBUTIVE).verdict == check(d, P.MEET_DISTRIBUTIVE).verdict)
        res.add(f"{a.name}: emcc/ejcc swap",
                check(a, P.EMCC).verdict == check(d, P.EJCC).verdict
                and check(a, P.EJCC).verdict == check(d, P.EMCC).verdict)
        res.add(f"{a.name}: handedness swaps under transpose",
                handedness(transpose_dual(a)) == _SWAP[handedness(a)])


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10)


def run_all(selected=None, echo=None) -> list[CriterionResult]:
    out = []
    for i, crit in enumerate(CRITERIA, start=1):
        if selected and i not in selected:
            continue
        r = crit()
        out.append(r)
        if echo:
            echo(r.line())
    return out
