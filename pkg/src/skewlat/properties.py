"""Decide the distributivity-related properties, each by several independent methods."""
from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import cosets as cz
from .algebra import (BudgetExceeded, CheckResult, FiniteSkewLattice,
                      check_quasi_identity, ensure_valid, holds)
from .corpus import builtin, op_dual
from .green import (handedness, lattice_image, natural_orders, quotient, relation_D,
                    relation_L, relation_R)
from .identities import (CANCEL, CATEGORICAL_Q, EMCC, EMCC_LEFT, EMCC_RIGHT, JOIN_DIST,
                         LINEAR, LINEAR_DUAL, LINEAR_LEFT, LINEAR_LEFT_TRIPLE,
                         LINEAR_RIGHT_MIRROR, LINEAR_RIGHT_TRIPLE, LEFT_MEET_DIST, LOWER_SYM,
                         LOWER_SYM_Q, MEET_DIST, MEET_DIST_LEFT_FORM, MEET_DIST_RIGHT_FORM,
                         NORMAL, QD_LEFT, RIGHT_MEET_DIST, SIMPLE_CANCEL, STRICT_Q, UPPER_SYM,
                         UPPER_SYM_Q, linear_family)
from .subalgebras import all_subalgebras, closure, find_embedding
from .terms import Identity, QuasiIdentity, identity_dual, mirror

DEFINITIONAL_CAP = 12
DIRECT_CAP = 10


class PropertyId(str, enum.Enum):
    DISTRIBUTIVE = "distributive"
    MEET_DISTRIBUTIVE = "meet_distributive"
    JOIN_DISTRIBUTIVE = "join_distributive"
    SYMMETRIC = "symmetric"
    UPPER_SYMMETRIC = "upper_symmetric"
    LOWER_SYMMETRIC = "lower_symmetric"
    CANCELLATIVE = "cancellative"
    SIMPLY_CANCELLATIVE = "simply_cancellative"
    QUASI_DISTRIBUTIVE = "quasi_distributive"
    LINEARLY_DISTRIBUTIVE = "linearly_distributive"
    CATEGORICAL = "categorical"
    STRICTLY_CATEGORICAL = "strictly_categorical"
    NORMAL = "normal"
    EMCC = "emcc"
    EJCC = "ejcc"
    BICONDITIONALLY_DISTRIBUTIVE = "biconditionally_distributive"
    RELATIVELY_DISTRIBUTIVE = "relatively_distributive"

    @classmethod
    def parse(cls, text: str) -> "PropertyId":
        key = text.strip().lower().replace("-", "_")
        aliases = {"qd": "quasi_distributive", "ld": "linearly_distributive",
                   "lineraly_distributive": "linearly_distributive"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown property {text!r}") from None


P = PropertyId


@dataclass(frozen=True)
class MethodResult:
    name: str
    result: CheckResult

    @property
    def verdict(self) -> bool:
        return self.result.holds


@dataclass
class PropertyReport:
    property: PropertyId
    verdict: bool
    witness: CheckResult | None
    methods: list[MethodResult]
    method_agreement: bool
    omitted: list[str] = field(default_factory=list)

    @property
    def methods_used(self) -> list[str]:
        return [m.name for m in self.methods]

    def method(self, name: str) -> MethodResult:
        for m in self.methods:
            if m.name == name:
                return m
        raise KeyError(name)

    def __bool__(self):
        return self.verdict

    def to_json(self, alg: FiniteSkewLattice | None = None) -> dict:
        out = {"id": self.property.value, "verdict": self.verdict,
               "methods": self.methods_used, "agreement": self.method_agreement}
        if self.witness is not None and not self.verdict:
            out["witness"] = _witness_json(self.witness, alg)
        if self.omitted:
            out["omitted"] = self.omitted
        return out


def _witness_json(res: CheckResult, alg):
    lab = alg.label if alg is not None else str
    w = {"assignment": {n: lab(v) for n, v in zip(res.names, res.witness)}}
    if res.lhs is not None:
        w["lhs"], w["rhs"] = lab(res.lhs), lab(res.rhs)
    return w


def _fail(witness, names, lhs=None, rhs=None) -> CheckResult:
    return CheckResult(False, tuple(int(v) for v in witness), lhs, rhs, tuple(names))


OK = CheckResult(True)


# -- helpers --------------------------------------------------------------------------

def _factors(alg):
    """The left and right handed factors S/R and S/L."""
    cached = alg._cache.get("factors")
    if cached is None:
        cached = (quotient(alg, relation_R(alg)).quotient, quotient(alg, relation_L(alg)).quotient)
        alg._cache["factors"] = cached
    return cached


def _result(rep):
    return OK if rep.verdict else rep.witness


def _both(results):
    for r in results:
        if not r:
            return r
    return OK


def _mirror_identity(ident: Identity, label: str) -> Identity:
    return Identity(mirror(ident.lhs), mirror(ident.rhs), ident.names, label)


QD_RIGHT = _mirror_identity(QD_LEFT, "quasi_distributive_right")


def _lattice_distributive(lat: FiniteSkewLattice) -> CheckResult:
    return holds(lat, MEET_DIST)


# -- individual properties ---------------------------------------------------------------

def _meet_methods(alg):
    out = [MethodResult("sandwich meet identity", holds(alg, MEET_DIST)),
           MethodResult("one-sided forms", _both([holds(alg, MEET_DIST_LEFT_FORM),
                                                  holds(alg, MEET_DIST_RIGHT_FORM)]))]
    left, right = _factors(alg)
    out.append(MethodResult("handed factors", _both([holds(left, MEET_DIST), holds(right, MEET_DIST)])))
    h = handedness(alg)
    if h in ("left", "both"):
        out.append(MethodResult("left-handed form", holds(alg, LEFT_MEET_DIST)))
    if h in ("right", "both"):
        out.append(MethodResult("right-handed form", holds(alg, RIGHT_MEET_DIST)))
    return out


def _join_methods(alg):
    out = [MethodResult("sandwich join identity", holds(alg, JOIN_DIST))]
    for m in _meet_methods(op_dual(alg)):
        out.append(MethodResult("dual: " + m.name, m.result))
    return out


def _distributive_methods(alg):
    meet = check(alg, P.MEET_DISTRIBUTIVE)
    join = check(alg, P.JOIN_DISTRIBUTIVE)
    out = [MethodResult("meet and join identities",
                        _both([_result(meet), _result(join)]))]
    left, right = _factors(alg)
    out.append(MethodResult("handed factors", _both([
        holds(f, i) for f in (left, right) for i in (MEET_DIST, JOIN_DIST)])))
    return out


def _symmetric_methods(alg, which):
    quasi = {"upper": [UPPER_SYM_Q], "lower": [LOWER_SYM_Q], "both": [UPPER_SYM_Q, LOWER_SYM_Q]}
    ident = {"upper": [UPPER_SYM], "lower": [LOWER_SYM], "both": [UPPER_SYM, LOWER_SYM]}
    out = [MethodResult("identity form", _both([holds(alg, i) for i in ident[which]])),
           MethodResult("commutation implication",
                        _both([check_quasi_identity(alg, q) for q in quasi[which]]))]
    m, j = alg.meet, alg.join
    mc, jc = m == m.T, j == j.T
    bad = {"upper": mc & ~jc, "lower": jc & ~mc, "both": mc != jc}[which]
    if bad.any():
        x, y = (int(v) for v in np.argwhere(bad)[0])
        out.append(MethodResult("commutation tables", _fail((x, y), "xy")))
    else:
        out.append(MethodResult("commutation tables", OK))
    return out


def _injective_rows(alg):
    """y ↦ (x∨y, x∧y) is injective for each x, and x ↦ (x∨z, x∧z) for each z."""
    n = alg.order
    pair = alg.join * n + alg.meet
    for x in range(n):
        vals, first = np.unique(pair[x], return_index=True)
        if len(vals) < n:
            y2 = next(y for y in range(n) if first[np.searchsorted(vals, pair[x, y])] != y)
            y1 = int(first[np.searchsorted(vals, pair[x, y2])])
            return _fail((x, y1, y2), "xyz")
    for z in range(n):
        vals, first = np.unique(pair[:, z], return_index=True)
        if len(vals) < n:
            x2 = next(x for x in range(n) if first[np.searchsorted(vals, pair[x, z])] != x)
            x1 = int(first[np.searchsorted(vals, pair[x2, z])])
            return _fail((x1, x2, z), "xyz")
    return OK


def _cancel_methods(alg):
    out = [MethodResult("cancellation quasi-identities", _both([check_quasi_identity(alg, q) for q in CANCEL]))]
    out.append(MethodResult("row injectivity", _injective_rows(alg)))
    left, right = _factors(alg)
    out.append(MethodResult("handed factors", _both(
        [check_quasi_identity(f, q) for f in (left, right) for q in CANCEL])))
    return out


def _simple_cancel_methods(alg):
    out = [MethodResult("simple cancellation quasi-identity", check_quasi_identity(alg, SIMPLE_CANCEL))]
    m, j = alg.meet, alg.join
    r = np.arange(alg.order)
    js = j[j[r[:, None], r[None, :]], r[:, None]]   # js[x, z] = x∨z∨x
    ms = m[m[r[:, None], r[None, :]], r[:, None]]
    res = OK
    for x in range(alg.order):
        same = ((js[x] == js) & (ms[x] == ms)).any(axis=1)
        same[x] = False
        if same.any():
            res = _fail((x, int(np.argmax(same))), "xy")
            break
    out.append(MethodResult("sandwich rows", res))
    return out


def _qd_methods(alg):
    lat = lattice_image(alg)
    lr = _lattice_distributive(lat)
    if not lr:
        reps = [relation_D(alg).classes[c][0] for c in lr.witness]
        lr = _fail(reps, lr.names)
    out = [MethodResult("lattice image", lr)]
    emb = None
    for name in ("m3", "n5"):
        emb = find_embedding(alg, builtin(name))
        if emb is not None:
            out.append(MethodResult("forbidden subalgebras",
                                    _fail([emb[p] for p in sorted(emb)], [f"{name}{p}" for p in sorted(emb)])))
            break
    else:
        out.append(MethodResult("forbidden subalgebras", OK))
    h = handedness(alg)
    if h in ("left", "both"):
        out.append(MethodResult("left-handed quasi-distributive identity", holds(alg, QD_LEFT)))
    if h in ("right", "both"):
        out.append(MethodResult("right-handed quasi-distributive identity", holds(alg, QD_RIGHT)))
    left, _ = _factors(alg)
    out.append(MethodResult("left factor quasi-distributive identity", holds(left, QD_LEFT)))
    return out


def _definitional_linear(alg):
    pre = natural_orders(alg).preorder
    n = alg.order
    seen = set()
    for a in range(n):
        for b in np.flatnonzero(pre[a]):
            for c in np.flatnonzero(pre[b]):
                elems = closure(alg, (a, int(b), int(c))).elements
                if elems in seen:
                    continue
                seen.add(elems)
                sub = alg.restrict(elems)
                for ident in (MEET_DIST, JOIN_DIST):
                    r = holds(sub, ident)
                    if not r:
                        w = tuple(elems[i] for i in r.witness)
                        return _fail(w, r.names, elems[r.lhs], elems[r.rhs])
    return OK


def _chain_linear(alg):
    co = natural_orders(alg).class_order
    classes = relation_D(alg).classes
    k = len(classes)
    for a, b in itertools.permutations(range(k), 2):
        if co[a, b]:
            sub = alg.restrict(sorted(classes[a] + classes[b]))
            if not (holds(sub, MEET_DIST) and holds(sub, JOIN_DIST)):
                return _fail((classes[a][0], classes[b][0]), ("A", "B"))
    for ch in cz.skew_chains(alg):
        if not cz.chain_distributive(ch):
            return _fail((ch.a_elems[0], ch.b_elems[0], ch.c_elems[0]), ("A", "B", "C"))
    return OK


def _linear_methods(alg, caps):
    out = [MethodResult("linear meet identity", holds(alg, LINEAR)),
           MethodResult("linear join identity", holds(alg, LINEAR_DUAL)),
           MethodResult("six-identity family", _both([holds(alg, i) for i in linear_family()])),
           MethodResult("skew chains", _chain_linear(alg))]
    omitted = []
    if alg.order <= caps["definitional"]:
        out.append(MethodResult("totally preordered subalgebras", _definitional_linear(alg)))
    else:
        omitted.append(f"totally preordered subalgebras (order > {caps['definitional']})")
    h = handedness(alg)
    if h in ("left", "both"):
        out.append(MethodResult("left-handed linear identity", holds(alg, LINEAR_LEFT)))
        out.append(MethodResult("left-handed triple identity", holds(alg, LINEAR_LEFT_TRIPLE)))
    if h in ("right", "both"):
        out.append(MethodResult("right-handed linear identity", holds(alg, LINEAR_RIGHT_MIRROR)))
        out.append(MethodResult("right-handed triple identity", holds(alg, LINEAR_RIGHT_TRIPLE)))
    return out, omitted


def _categorical_structural(alg):
    for ch in cz.skew_chains(alg):
        chis = {frozenset(c.pairs) for c in cz.coset_bijections(alg, ch.A, ch.C)}
        phis = cz.coset_bijections(alg, ch.A, ch.B)
        psis = cz.coset_bijections(alg, ch.B, ch.C)
        for phi in phis:
            for psi in psis:
                comp = phi.compose(psi)
                if comp and frozenset(comp.items()) not in chis:
                    a = min(comp)
                    return _fail((a, phi.forward[a], comp[a]), ("a", "b", "c"))
    return OK


def _categorical_methods(alg):
    return [MethodResult("categorical quasi-identity", check_quasi_identity(alg, CATEGORICAL_Q)),
            MethodResult("coset bijection composites", _categorical_structural(alg))]


def _strict_midpoints(alg):
    gt = natural_orders(alg).strictly_above()
    dcls = relation_D(alg).class_of
    for a, c in np.argwhere(gt):
        mids = np.flatnonzero(gt[a] & gt[:, c])
        if len(mids) > 1:
            cl = dcls[mids]
            for i in range(len(mids)):
                for k in range(i + 1, len(mids)):
                    if cl[i] == cl[k]:
                        return _fail((a, mids[i], c, mids[k]), ("a", "b", "c", "b'"))
    return OK


def _strict_intervals(alg):
    ge = natural_orders(alg).partial_order
    gt = natural_orders(alg).strictly_above()
    m, j = alg.meet, alg.join
    for a, b in np.argwhere(gt):
        iv = np.flatnonzero(ge[a] & ge[:, b])
        sub_m, sub_j = m[np.ix_(iv, iv)], j[np.ix_(iv, iv)]
        s = set(iv.tolist())
        if not set(sub_m.ravel().tolist()) <= s or not set(sub_j.ravel().tolist()) <= s:
            return _fail((a, b), ("a", "b"))
        bad = np.argwhere((sub_m != sub_m.T) | (sub_j != sub_j.T))
        if len(bad):
            x, y = bad[0]
            return _fail((a, b, iv[x], iv[y]), ("a", "b", "x", "y"))
    return OK


def _strict_cosets(alg):
    cat = check_quasi_identity(alg, CATEGORICAL_Q)
    if not cat:
        return cat
    for ch in cz.skew_chains(alg):
        a_cos = cz.cosets(alg, ch.A, ch.B).cosets
        c_cos = cz.cosets(alg, ch.C, ch.B).cosets
        for x in a_cos:
            for y in c_cos:
                if not set(x) & set(y):
                    return _fail((ch.a_elems[0], x[0], y[0], ch.c_elems[0]), ("a", "b", "b'", "c"))
    return OK


def _strict_methods(alg, budget):
    out = [MethodResult("unique midpoints", _strict_midpoints(alg)),
           MethodResult("interval sublattices", _strict_intervals(alg)),
           MethodResult("coset intersections", _strict_cosets(alg))]
    omitted = []
    try:
        out.append(MethodResult("quasi-identity", check_quasi_identity(alg, STRICT_Q, budget=budget)))
    except BudgetExceeded:
        omitted.append("quasi-identity (budget)")
    return out, omitted


def _normal_methods(alg, budget):
    out = []
    omitted = []
    try:
        out.append(MethodResult("identity", holds(alg, NORMAL, budget=budget)))
    except BudgetExceeded:
        omitted.append("identity (budget)")
    ge = natural_orders(alg).partial_order
    m, j = alg.meet, alg.join
    res = OK
    for e in range(alg.order):
        down = np.flatnonzero(ge[e])
        s = set(down.tolist())
        sm, sj = m[np.ix_(down, down)], j[np.ix_(down, down)]
        if not (set(sm.ravel().tolist()) <= s and set(sj.ravel().tolist()) <= s):
            res = _fail((e,), ("e",))
            break
        bad = np.argwhere((sm != sm.T) | (sj != sj.T))
        if len(bad):
            x, y = bad[0]
            res = _fail((e, down[x], down[y]), ("e", "x", "y"))
            break
    out.append(MethodResult("principal down-sets", res))
    return out, omitted


def _emcc_structural(alg):
    classes = relation_D(alg).classes
    co = natural_orders(alg).class_order
    ge = natural_orders(alg).partial_order
    lat = lattice_image(alg)
    m, j = alg.meet, alg.join
    k = len(classes)
    arrs = [np.asarray(c) for c in classes]
    for A in range(k):
        xa = arrs[A]
        for B in range(k):
            M = int(lat.meet[A, B])
            xm = arrs[M]
            xb = arrs[B]
            for D in range(k):
                if not co[D, B]:
                    continue
                xd = arrs[D]
                # B-coset in D of each d, as the sorted set B∨d∨B
                labels = [tuple(sorted(set(j[j[xb[:, None], d], xb[None, :]].ravel().tolist())))
                          for d in xd]
                img = ge[np.ix_(xd, xm)].astype(np.int64)
                share = (img @ img.T) > 0
                sand = m[m[xa[:, None], xd[None, :]], xa[:, None]]
                for p in range(len(xd)):
                    for q in range(p + 1, len(xd)):
                        if share[p, q] and labels[p] == labels[q]:
                            diff = np.flatnonzero(sand[:, p] != sand[:, q])
                            if len(diff):
                                a = xa[diff[0]]
                                return _fail((a, xd[p], xd[q]), ("a", "d", "d'"),
                                             int(sand[diff[0], p]), int(sand[diff[0], q]))
    return OK


def _emcc_methods(alg):
    out = [MethodResult("emcc identity", holds(alg, EMCC)),
           MethodResult("class condition", _emcc_structural(alg))]
    h = handedness(alg)
    if h in ("left", "both"):
        out.append(MethodResult("left-handed emcc identity", holds(alg, EMCC_LEFT)))
    if h in ("right", "both"):
        out.append(MethodResult("right-handed emcc identity", holds(alg, EMCC_RIGHT)))
    return out


def _ejcc_methods(alg):
    out = [MethodResult("dual identity", holds(alg, identity_dual(EMCC)))]
    for mres in _emcc_methods(op_dual(alg)):
        out.append(MethodResult("dual: " + mres.name, mres.result))
    return out


def _biconditional_methods(alg):
    m, j = alg.meet, alg.join
    n = alg.order
    x, y, z = np.indices((n, n, n))
    l3 = m[m[x, j[y, z]], x]
    r3 = j[m[m[x, y], x], m[m[x, z], x]]
    l4 = j[j[x, m[y, z]], x]
    r4 = m[j[j[x, y], x], j[j[x, z], x]]
    bad = (l3 == r3) != (l4 == r4)
    if bad.any():
        w = np.unravel_index(int(np.argmax(bad.ravel())), bad.shape)
        table = _fail(w, "xyz")
    else:
        table = OK
    fwd = QuasiIdentity(((MEET_DIST.lhs, MEET_DIST.rhs),), (JOIN_DIST.lhs, JOIN_DIST.rhs), 3,
                        ("x", "y", "z"), "meet_instance_implies_join_instance")
    bwd = QuasiIdentity(((JOIN_DIST.lhs, JOIN_DIST.rhs),), (MEET_DIST.lhs, MEET_DIST.rhs), 3,
                        ("x", "y", "z"), "join_instance_implies_meet_instance")
    quasi = _both([check_quasi_identity(alg, fwd), check_quasi_identity(alg, bwd)])
    return [MethodResult("per-triple table", table), MethodResult("instance implications", quasi)]


def _relative_methods(alg, caps):
    ld = check(alg, P.LINEARLY_DISTRIBUTIVE, caps=caps)
    em = check(alg, P.EMCC)
    ej = check(alg, P.EJCC)
    out = [MethodResult("linear and extended class conditions",
                        _both([_result(ld), _result(em), _result(ej)]))]
    omitted = []
    if alg.order <= caps["direct"]:
        res = OK
        for sub in all_subalgebras(alg, cap=caps["direct"]):
            s = sub.algebra()
            if _lattice_distributive(lattice_image(s)) and not (holds(s, MEET_DIST) and holds(s, JOIN_DIST)):
                res = _fail(sub.elements, [f"s{i}" for i in range(len(sub.elements))])
                break
        out.append(MethodResult("quasi-distributive subalgebras", res))
    else:
        omitted.append(f"quasi-distributive subalgebras (order > {caps['direct']})")
    return out, omitted


# -- dispatcher -----------------------------------------------------------------------------

def _caps(caps):
    out = {"definitional": DEFINITIONAL_CAP, "direct": DIRECT_CAP}
    if caps:
        out.update(caps)
    return out


def check(alg: FiniteSkewLattice, p: PropertyId | str, *, budget: int | None = None,
          caps: dict | None = None) -> PropertyReport:
    """Decide one property; every applicable method runs and must agree."""
    p = PropertyId.parse(p) if isinstance(p, str) else p
    caps = _caps(caps)
    key = ("property", p, caps["definitional"], caps["direct"], budget)
    cached = alg._cache.get(key)
    if cached is not None:
        return cached
    ensure_valid(alg)
    omitted: list[str] = []
    if p is P.MEET_DISTRIBUTIVE:
        methods = _meet_methods(alg)
    elif p is P.JOIN_DISTRIBUTIVE:
        methods = _join_methods(alg)
    elif p is P.DISTRIBUTIVE:
        methods = _distributive_methods(alg)
    elif p is P.SYMMETRIC:
        methods = _symmetric_methods(alg, "both")
    elif p is P.UPPER_SYMMETRIC:
        methods = _symmetric_methods(alg, "upper")
    elif p is P.LOWER_SYMMETRIC:
        methods = _symmetric_methods(alg, "lower")
    elif p is P.CANCELLATIVE:
        methods = _cancel_methods(alg)
    elif p is P.SIMPLY_CANCELLATIVE:
        methods = _simple_cancel_methods(alg)
    elif p is P.QUASI_DISTRIBUTIVE:
        methods = _qd_methods(alg)
    elif p is P.LINEARLY_DISTRIBUTIVE:
        methods, omitted = _linear_methods(alg, caps)
    elif p is P.CATEGORICAL:
        methods = _categorical_methods(alg)
    elif p is P.STRICTLY_CATEGORICAL:
        methods, omitted = _strict_methods(alg, budget)
    elif p is P.NORMAL:
        methods, omitted = _normal_methods(alg, budget)
    elif p is P.EMCC:
        methods = _emcc_methods(alg)
    elif p is P.EJCC:
        methods = _ejcc_methods(alg)
    elif p is P.BICONDITIONALLY_DISTRIBUTIVE:
        methods = _biconditional_methods(alg)
    elif p is P.RELATIVELY_DISTRIBUTIVE:
        methods, omitted = _relative_methods(alg, caps)
    else:  # pragma: no cover
        raise ValueError(p)
    verdicts = {m.verdict for m in methods}
    verdict = methods[0].verdict
    witness = None
    if not verdict:
        witness = methods[0].result
    rep = PropertyReport(p, verdict, witness, methods, len(verdicts) == 1, omitted)
    alg._cache[key] = rep
    return rep


def full_report(alg: FiniteSkewLattice, *, budget: int | None = None,
                caps: dict | None = None) -> list[PropertyReport]:
    return [check(alg, p, budget=budget, caps=caps) for p in PropertyId]


def verdicts(alg: FiniteSkewLattice, **kw) -> dict[PropertyId, bool]:
    return {r.property: r.verdict for r in full_report(alg, **kw)}


# -- implication suite ---------------------------------------------------------------------------

def is_skew_diamond(alg: FiniteSkewLattice) -> bool:
    lat = lattice_image(alg)
    return lat.order == 4 and not _is_chain(lat)


def _is_chain(lat):
    r = np.arange(lat.order)
    m = lat.meet
    return bool(((m == r[:, None]) | (m == r[None, :])).all())


def _imp(a, b):
    return (not a) or b


def implications(v: dict[PropertyId, bool], alg: FiniteSkewLattice | None = None) -> list[tuple[str, bool]]:
    """Named implications among verdicts; each entry is (name, satisfied)."""
    d, md, jd = v[P.DISTRIBUTIVE], v[P.MEET_DISTRIBUTIVE], v[P.JOIN_DISTRIBUTIVE]
    sym, us, ls = v[P.SYMMETRIC], v[P.UPPER_SYMMETRIC], v[P.LOWER_SYMMETRIC]
    can, sc = v[P.CANCELLATIVE], v[P.SIMPLY_CANCELLATIVE]
    qd, ld = v[P.QUASI_DISTRIBUTIVE], v[P.LINEARLY_DISTRIBUTIVE]
    cat, strict, nor = v[P.CATEGORICAL], v[P.STRICTLY_CATEGORICAL], v[P.NORMAL]
    em, ej = v[P.EMCC], v[P.EJCC]
    bi, rel = v[P.BICONDITIONALLY_DISTRIBUTIVE], v[P.RELATIVELY_DISTRIBUTIVE]
    out = [
        ("distributive iff meet and join distributive", d == (md and jd)),
        ("symmetric: meet distributive iff join distributive", _imp(sym, md == jd)),
        ("symmetric iff upper and lower symmetric", sym == (us and ls)),
        ("cancellative implies simply cancellative", _imp(can, sc)),
        ("simply cancellative implies quasi-distributive", _imp(sc, qd)),
        ("cancellative implies symmetric", _imp(can, sym)),
        ("distributive implies quasi- and linearly distributive", _imp(d, qd and ld)),
        ("linearly distributive implies categorical", _imp(ld, cat)),
        ("strictly categorical implies linearly distributive", _imp(strict, ld)),
        ("normal implies strictly categorical", _imp(nor, strict)),
        ("strictly categorical and quasi-distributive imply distributive and simply cancellative",
         _imp(strict and qd, d and sc)),
        ("strictly categorical and quasi-distributive: cancellative iff symmetric",
         _imp(strict and qd, can == sym)),
        ("meet distributive implies emcc", _imp(md, em)),
        ("join distributive implies ejcc", _imp(jd, ej)),
        ("upper symmetric implies emcc", _imp(us, em)),
        ("lower symmetric implies ejcc", _imp(ls, ej)),
        ("quasi- and linearly distributive: meet distributive iff emcc", _imp(qd and ld, md == em)),
        ("quasi- and linearly distributive: join distributive iff ejcc", _imp(qd and ld, jd == ej)),
        ("distributive iff quasi-, linearly distributive, emcc and ejcc", d == (qd and ld and em and ej)),
        ("upper symmetric: meet distributive iff quasi- and linearly distributive",
         _imp(us, md == (qd and ld))),
        ("lower symmetric: join distributive iff quasi- and linearly distributive",
         _imp(ls, jd == (qd and ld))),
        ("symmetric: distributive iff quasi- and linearly distributive", _imp(sym, d == (qd and ld))),
        ("simply cancellative: distributive iff linearly distributive", _imp(sc, d == ld)),
        ("quasi-distributive and biconditionally distributive imply distributive", _imp(qd and bi, d)),
        ("relatively distributive iff linearly distributive, emcc and ejcc", rel == (ld and em and ej)),
        ("relatively distributive implies linearly distributive", _imp(rel, ld)),
        ("biconditionally distributive implies relatively distributive", _imp(bi, rel)),
        ("symmetric and linearly distributive imply relatively distributive", _imp(sym and ld, rel)),
    ]
    if alg is not None:
        out.append(("skew diamond: distributive iff linearly distributive",
                    _imp(is_skew_diamond(alg), d == ld)))
    return out


def report_json(alg: FiniteSkewLattice, reports: list[PropertyReport] | None = None) -> dict:
    reports = full_report(alg) if reports is None else reports
    v = {r.property: r.verdict for r in reports}
    return {
        "algebra": alg.name,
        "order": alg.order,
        "properties": [r.to_json(alg) for r in reports],
        "implications": [{"name": n, "holds": h} for n, h in implications(v, alg)],
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)
