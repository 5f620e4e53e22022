"""Green's relations, natural orders, quotients and the two decomposition theorems."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import FiniteSkewLattice, ensure_valid, holds
from .identities import LEFT_HANDED, MEET_COMM, JOIN_COMM, RECTANGULAR, RIGHT_HANDED


class GreenConsistencyError(RuntimeError):
    """Raised when derived structure contradicts the axioms (an invalid algebra slipped in)."""


@dataclass(frozen=True, eq=False)
class EquivalenceRelation:
    order: int
    class_of: np.ndarray
    classes: tuple[tuple[int, ...], ...]

    @classmethod
    def from_matrix(cls, mat: np.ndarray) -> "EquivalenceRelation":
        mat = np.asarray(mat, dtype=bool)
        n = mat.shape[0]
        if not (mat.diagonal().all() and (mat == mat.T).all()):
            raise GreenConsistencyError("relation is not reflexive and symmetric")
        if ((mat.astype(np.int64) @ mat.astype(np.int64) > 0) != mat).any():
            raise GreenConsistencyError("relation is not transitive")
        class_of = np.full(n, -1, dtype=np.int64)
        classes = []
        for x in range(n):
            if class_of[x] < 0:
                members = tuple(int(v) for v in np.flatnonzero(mat[x]))
                class_of[list(members)] = len(classes)
                classes.append(members)
        class_of.setflags(write=False)
        return cls(n, class_of, tuple(classes))

    @classmethod
    def identity(cls, n: int) -> "EquivalenceRelation":
        return cls.from_matrix(np.eye(n, dtype=bool))

    def matrix(self) -> np.ndarray:
        return self.class_of[:, None] == self.class_of[None, :]

    def related(self, a: int, b: int) -> bool:
        return bool(self.class_of[a] == self.class_of[b])

    def __len__(self):
        return len(self.classes)

    def __eq__(self, other):
        return isinstance(other, EquivalenceRelation) and np.array_equal(self.class_of, other.class_of)

    def __hash__(self):
        return hash(self.class_of.tobytes())


def _is_congruence(alg, mat):
    pairs = np.argwhere(mat)
    for t in (alg.meet, alg.join):
        for x, x2 in pairs:
            if not (mat[t[x], t[x2]].all() and mat[t[:, x], t[:, x2]].all()):
                return False
    return True


def _green(alg: FiniteSkewLattice):
    cached = alg._cache.get("green")
    if cached is not None:
        return cached
    ensure_valid(alg)
    m = alg.meet
    r = np.arange(alg.order)
    a, b = r[:, None], r[None, :]
    rmat = (m[a, b] == b) & (m[b, a] == a)
    lmat = (m[a, b] == a) & (m[b, a] == b)
    aba = m[m[a, b], a]
    dmat = (aba == a) & (aba.T == b)
    j = alg.join
    # the join-side characterisations must agree
    if not (np.array_equal(rmat, (j[a, b] == a) & (j[b, a] == b))
            and np.array_equal(lmat, (j[a, b] == b) & (j[b, a] == a))
            and np.array_equal(dmat, (j[j[a, b], a] == a) & (j[j[b, a], b] == b))):
        raise GreenConsistencyError("meet and join descriptions of Green's relations differ")
    rels = []
    for mat in (rmat, lmat, dmat):
        if not _is_congruence(alg, mat):
            raise GreenConsistencyError("Green's relation is not a congruence")
        rels.append(EquivalenceRelation.from_matrix(mat))
    li, ri = lmat.astype(np.int64), rmat.astype(np.int64)
    if not (np.array_equal((li @ ri) > 0, dmat) and np.array_equal((ri @ li) > 0, dmat)):
        raise GreenConsistencyError("L∘R = R∘L = D fails")
    if not np.array_equal(lmat & rmat, np.eye(alg.order, dtype=bool)):
        raise GreenConsistencyError("L ∩ R is not the identity")
    alg._cache["green"] = tuple(rels)
    return alg._cache["green"]


def relation_R(alg: FiniteSkewLattice) -> EquivalenceRelation:
    return _green(alg)[0]


def relation_L(alg: FiniteSkewLattice) -> EquivalenceRelation:
    return _green(alg)[1]


def relation_D(alg: FiniteSkewLattice) -> EquivalenceRelation:
    return _green(alg)[2]


class NotACongruence(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"relation is not a congruence: {witness}")


@dataclass(frozen=True, eq=False)
class QuotientAlgebra:
    base: FiniteSkewLattice
    relation: EquivalenceRelation
    quotient: FiniteSkewLattice


def quotient(alg: FiniteSkewLattice, rel: EquivalenceRelation) -> QuotientAlgebra:
    """The induced algebra on classes; well-definedness checked for every pair."""
    reps = np.array([c[0] for c in rel.classes])
    cof = rel.class_of
    qm = cof[alg.meet[np.ix_(reps, reps)]]
    qj = cof[alg.join[np.ix_(reps, reps)]]
    for t, q, tag in ((alg.meet, qm, "meet"), (alg.join, qj, "join")):
        induced = q[cof[:, None], cof[None, :]]
        bad = np.argwhere(cof[t] != induced)
        if len(bad):
            x, y = (int(v) for v in bad[0])
            raise NotACongruence((tag, x, y))
    name = f"{alg.name}/~" if alg.name else ""
    return QuotientAlgebra(alg, rel, FiniteSkewLattice(qm, qj, name))


def lattice_image(alg: FiniteSkewLattice) -> FiniteSkewLattice:
    """S/D with classes numbered as in ``relation_D(alg).classes``."""
    q = alg._cache.get("lattice_image")
    if q is None:
        q = alg._cache["lattice_image"] = quotient(alg, relation_D(alg)).quotient
    return q


@dataclass(frozen=True, eq=False)
class NaturalOrderData:
    preorder: np.ndarray       # preorder[a, b]  ⇔  a ≽ b
    partial_order: np.ndarray  # partial_order[a, b]  ⇔  a ≥ b
    class_order: np.ndarray    # class_order[P, Q]  ⇔  P ≥ Q in S/D

    def strictly_above(self) -> np.ndarray:
        return self.partial_order & ~np.eye(len(self.partial_order), dtype=bool)


def natural_orders(alg: FiniteSkewLattice) -> NaturalOrderData:
    cached = alg._cache.get("orders")
    if cached is not None:
        return cached
    ensure_valid(alg)
    m, j = alg.meet, alg.join
    n = alg.order
    r = np.arange(n)
    a, b = r[:, None], r[None, :]
    pre = j[j[a, b], a] == a
    if not np.array_equal(pre, m[m[b, a], b] == b):
        raise GreenConsistencyError("the two descriptions of the natural preorder differ")
    ge = (m[a, b] == b) & (m[b, a] == b)
    if not np.array_equal(ge, (j[a, b] == a) & (j[b, a] == a)):
        raise GreenConsistencyError("the two descriptions of the natural partial order differ")
    eye = np.eye(n, dtype=bool)
    for mat, what in ((pre, "preorder"), (ge, "partial order")):
        mi = mat.astype(np.int64)
        if not mat.diagonal().all() or ((mi @ mi > 0) & ~mat).any():
            raise GreenConsistencyError(f"natural {what} is not reflexive and transitive")
    if (ge & ge.T & ~eye).any():
        raise GreenConsistencyError("natural partial order is not antisymmetric")
    if (ge & ~pre).any():
        raise GreenConsistencyError("partial order does not refine the preorder")
    d = relation_D(alg)
    lat = lattice_image(alg)
    k = lat.order
    kr = np.arange(k)
    class_order = lat.meet[kr[:, None], kr[None, :]] == kr[None, :]
    cof = d.class_of
    if not np.array_equal(pre, class_order[cof[:, None], cof[None, :]]):
        raise GreenConsistencyError("a ≽ b does not match the order of D-classes")
    # a ≽ b gives a ≥ a∧b∧a and b∨a∨b ≥ b
    for x, y in np.argwhere(pre):
        if not (ge[x, m[m[x, y], x]] and ge[j[j[y, x], y], y]):
            raise GreenConsistencyError(f"missing order witnesses for {x} ≽ {y}")
    data = NaturalOrderData(pre, ge, class_order)
    alg._cache["orders"] = data
    return data


def class_order(alg: FiniteSkewLattice) -> np.ndarray:
    return natural_orders(alg).class_order


# -- handedness ------------------------------------------------------------------

def is_lattice(alg: FiniteSkewLattice) -> bool:
    return bool(holds(alg, MEET_COMM) and holds(alg, JOIN_COMM))


def is_rectangular(alg: FiniteSkewLattice) -> bool:
    return bool(holds(alg, RECTANGULAR))


def _per_class(alg, left: bool) -> bool:
    for cls in relation_D(alg).classes:
        for x in cls:
            for y in cls:
                if left and not (alg.meet[x, y] == x and alg.join[x, y] == y):
                    return False
                if not left and not (alg.meet[x, y] == y and alg.join[x, y] == x):
                    return False
    return True


def is_left_handed(alg: FiniteSkewLattice) -> bool:
    verdict = all(holds(alg, i) for i in LEFT_HANDED)
    if verdict != _per_class(alg, True):
        raise GreenConsistencyError("left-handed identities disagree with the per-class form")
    return verdict


def is_right_handed(alg: FiniteSkewLattice) -> bool:
    verdict = all(holds(alg, i) for i in RIGHT_HANDED)
    if verdict != _per_class(alg, False):
        raise GreenConsistencyError("right-handed identities disagree with the per-class form")
    return verdict


def handedness(alg: FiniteSkewLattice) -> str | None:
    left, right = is_left_handed(alg), is_right_handed(alg)
    if left and right:
        return "both"
    return "left" if left else "right" if right else None


# -- decomposition theorems ---------------------------------------------------------

@dataclass
class DecompositionReport:
    ok: bool
    checks: dict[str, bool]
    detail: dict = field(default_factory=dict)


def _closed(alg, elems):
    s = set(elems)
    idx = np.array(sorted(s))
    return set(np.unique(alg.meet[np.ix_(idx, idx)]).tolist()) <= s and \
        set(np.unique(alg.join[np.ix_(idx, idx)]).tolist()) <= s


def _closure(alg, elems):
    s = set(int(e) for e in elems)
    while True:
        idx = np.array(sorted(s))
        new = set(alg.meet[np.ix_(idx, idx)].ravel().tolist()) | set(alg.join[np.ix_(idx, idx)].ravel().tolist())
        if new <= s:
            return s
        s |= new


def _rectangular_set(alg, elems):
    idx = np.array(sorted(elems))
    m = alg.meet
    return bool((m[m[idx[:, None], idx[None, :]], idx[:, None]] == idx[:, None]).all())


def verify_first_decomposition(alg: FiniteSkewLattice) -> DecompositionReport:
    """Each D-class is a maximal rectangular subalgebra and S/D is a lattice."""
    classes = relation_D(alg).classes
    closed = all(_closed(alg, c) for c in classes)
    rect = all(_rectangular_set(alg, c) for c in classes)
    maximal = True
    offender = None
    for c in classes:
        cs = set(c)
        for e in range(alg.order):
            if e in cs:
                continue
            ext = _closure(alg, cs | {e})
            if _rectangular_set(alg, ext):
                maximal, offender = False, (c, e)
                break
        if not maximal:
            break
    lat = is_lattice(lattice_image(alg))
    checks = {"classes_closed": closed, "classes_rectangular": rect,
              "classes_maximal": maximal, "quotient_is_lattice": lat}
    detail = {"class_sizes": [len(c) for c in classes]}
    if offender:
        detail["extension"] = offender
    return DecompositionReport(all(checks.values()), checks, detail)


@dataclass(frozen=True, eq=False)
class FiberedProduct:
    pairs: tuple[tuple[int, int], ...]   # (R-class index, L-class index)
    algebra: FiniteSkewLattice


def fibered_product(alg: FiniteSkewLattice) -> FiberedProduct:
    """S/R ×_{S/D} S/L with componentwise tables."""
    qr = quotient(alg, relation_R(alg))
    ql = quotient(alg, relation_L(alg))
    dcls = relation_D(alg).class_of
    rd = [int(dcls[c[0]]) for c in qr.relation.classes]
    ld = [int(dcls[c[0]]) for c in ql.relation.classes]
    pairs = tuple((r, l) for r in range(len(rd)) for l in range(len(ld)) if rd[r] == ld[l])
    pos = {p: i for i, p in enumerate(pairs)}
    k = len(pairs)
    meet = np.zeros((k, k), dtype=np.int64)
    join = np.zeros((k, k), dtype=np.int64)
    for i, (r1, l1) in enumerate(pairs):
        for j, (r2, l2) in enumerate(pairs):
            meet[i, j] = pos[(int(qr.quotient.meet[r1, r2]), int(ql.quotient.meet[l1, l2]))]
            join[i, j] = pos[(int(qr.quotient.join[r1, r2]), int(ql.quotient.join[l1, l2]))]
    return FiberedProduct(pairs, FiniteSkewLattice(meet, join))


def verify_second_decomposition(alg: FiniteSkewLattice) -> DecompositionReport:
    """x ↦ (R_x, L_x) is an isomorphism onto the fibered product."""
    fp = fibered_product(alg)
    pos = {p: i for i, p in enumerate(fp.pairs)}
    rc, lc = relation_R(alg).class_of, relation_L(alg).class_of
    image = np.array([pos.get((int(rc[x]), int(lc[x])), -1) for x in range(alg.order)])
    in_product = bool((image >= 0).all())
    bijective = in_product and len(set(image.tolist())) == alg.order == len(fp.pairs)
    hom = in_product and bool(
        (image[alg.meet] == fp.algebra.meet[image[:, None], image[None, :]]).all()
        and (image[alg.join] == fp.algebra.join[image[:, None], image[None, :]]).all())
    checks = {"maps_into_product": in_product, "bijective": bijective, "homomorphism": hom}
    detail = {"left_factor_order": len(relation_R(alg).classes),
              "right_factor_order": len(relation_L(alg).classes),
              "product_order": len(fp.pairs)}
    return DecompositionReport(all(checks.values()), checks, detail)


# -- DOT export ----------------------------------------------------------------------

def _covers(ge: np.ndarray):
    n = ge.shape[0]
    gt = ge & ~np.eye(n, dtype=bool)
    out = []
    for a, b in np.argwhere(gt):
        if not any(gt[a, c] and gt[c, b] for c in range(n)):
            out.append((int(a), int(b)))
    return out


def dot_d_classes(alg: FiniteSkewLattice) -> str:
    """Hasse diagram of S/D, one node per D-class."""
    d = relation_D(alg)
    co = natural_orders(alg).class_order
    lines = ["digraph dclasses {", "  rankdir=BT;", "  node [shape=box];"]
    for i, c in enumerate(d.classes):
        lab = ",".join(alg.label(e) for e in c)
        lines.append(f'  D{i} [label="{{{lab}}}"];')
    for a, b in _covers(co):
        lines.append(f"  D{b} -> D{a};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_natural_order(alg: FiniteSkewLattice) -> str:
    """Natural partial order on elements: covering edges, D-classes as clusters."""
    d = relation_D(alg)
    ge = natural_orders(alg).partial_order
    lines = ["digraph natural_order {", "  rankdir=BT;"]
    for i, c in enumerate(d.classes):
        lines.append(f"  subgraph cluster_D{i} {{")
        lines.append("    style=rounded; color=gray;")
        for e in c:
            lines.append(f'    n{e} [label="{alg.label(e)}"];')
        lines.append("  }")
    for a, b in _covers(ge):
        lines.append(f"  n{b} -> n{a} [style=solid, arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"
