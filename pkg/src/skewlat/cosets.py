"""Cosets, coset bijections, AC-components and midpoints of skew chains."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import FiniteSkewLattice, check_quasi_identity, holds
from .green import lattice_image, natural_orders, relation_D
from .identities import CATEGORICAL_Q, JOIN_DIST, MEET_DIST, STRICT_Q


class CosetGeometryError(RuntimeError):
    """A structural fact about cosets failed to hold (signals an invalid algebra)."""


class ClassesNotComparable(ValueError):
    pass


class NotAbove(ValueError):
    pass


class ChainNotDistributive(ValueError):
    pass


def _classes(alg):
    return relation_D(alg).classes


def _class_above(alg, x: int, y: int) -> bool:
    """D-class x lies strictly above D-class y."""
    return x != y and bool(natural_orders(alg).class_order[x, y])


def _strict_ge(alg):
    return natural_orders(alg).strictly_above()


# -- skew chains ------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SkewChain:
    alg: FiniteSkewLattice
    A: int
    B: int
    C: int

    def __post_init__(self):
        a = self.alg
        if not (_class_above(a, self.A, self.B) and _class_above(a, self.B, self.C)):
            raise ValueError("classes do not form a chain A > B > C")

    @property
    def a_elems(self):
        return _classes(self.alg)[self.A]

    @property
    def b_elems(self):
        return _classes(self.alg)[self.B]

    @property
    def c_elems(self):
        return _classes(self.alg)[self.C]

    def elements(self, middle=None):
        mid = self.b_elems if middle is None else tuple(middle)
        return tuple(sorted(self.a_elems + tuple(mid) + self.c_elems))

    def subalgebra(self, middle=None) -> FiniteSkewLattice:
        """A ∪ B′ ∪ C as a stand-alone algebra, elements kept in increasing order."""
        return self.alg.restrict(self.elements(middle))

    def __repr__(self):
        return f"SkewChain(A={self.A}, B={self.B}, C={self.C})"


def skew_chains(alg: FiniteSkewLattice) -> list[SkewChain]:
    k = len(_classes(alg))
    co = natural_orders(alg).class_order
    out = []
    for a, b, c in itertools.permutations(range(k), 3):
        if co[a, b] and co[b, c]:
            out.append(SkewChain(alg, a, b, c))
    return out


# -- cosets --------------------------------------------------------------------------------

@dataclass(frozen=True)
class CosetDecomposition:
    acting: int                 # the class X whose cosets are taken
    target: int                 # class partitioned by the cosets
    kind: str                   # "upper" (X ∧ y ∧ X), "lower" (X ∨ y ∨ X) or "generalized"
    cosets: tuple[tuple[int, ...], ...]
    omega: int | None           # common size when the classes are comparable

    def coset_of(self, y: int) -> tuple[int, ...]:
        for c in self.cosets:
            if y in c:
                return c
        raise KeyError(y)


def _sandwich(alg, xs, y, op):
    t = alg.meet if op == "meet" else alg.join
    xs = np.asarray(xs)
    return tuple(sorted(set(t[t[xs[:, None], y], xs[None, :]].ravel().tolist())))


def _partition(alg, sets, target):
    seen = {}
    for s in sets:
        seen.setdefault(s, None)
    blocks = sorted(seen, key=lambda s: s[0])
    flat = sorted(e for b in blocks for e in b)
    if flat != sorted(target):
        raise CosetGeometryError("cosets do not partition their class")
    return tuple(blocks)


def cosets(alg: FiniteSkewLattice, X: int, Y: int, kind: str = "classical") -> CosetDecomposition:
    """X-cosets in the D-class Y.

    ``classical``: X ∧ y ∧ X when X ≥ Y, X ∨ y ∨ X when Y ≥ X.
    ``generalized``: the sets X ∧ y ∧ X for y ∈ Y, which partition the meet class M = X ∧ Y.
    """
    classes = _classes(alg)
    co = natural_orders(alg).class_order
    xs = classes[X]
    if kind == "generalized":
        return _generalized(alg, X, Y)
    if co[X, Y]:
        sets = [_sandwich(alg, xs, y, "meet") for y in classes[Y]]
        tag = "upper"
    elif co[Y, X]:
        sets = [_sandwich(alg, xs, y, "join") for y in classes[Y]]
        tag = "lower"
    else:
        raise ClassesNotComparable(f"D-classes {X} and {Y} are not comparable")
    for y, s in zip(classes[Y], sets):
        if y not in s:
            raise CosetGeometryError(f"{y} is not in its own coset")
    blocks = _partition(alg, sets, classes[Y])
    sizes = {len(b) for b in blocks}
    if len(sizes) != 1:
        raise CosetGeometryError(f"cosets of {X} in {Y} have sizes {sorted(sizes)}")
    t = alg.meet
    for b in blocks:
        idx = np.array(b)
        # each coset is a rectangular subalgebra
        if not (set(t[np.ix_(idx, idx)].ravel().tolist()) <= set(b)
                and set(alg.join[np.ix_(idx, idx)].ravel().tolist()) <= set(b)):
            raise CosetGeometryError("coset is not closed")
    return CosetDecomposition(X, Y, tag, blocks, sizes.pop())


def _generalized(alg, A, B):
    classes = _classes(alg)
    lat = lattice_image(alg)
    M = int(lat.meet[A, B])
    ge = natural_orders(alg).partial_order
    xs = np.asarray(classes[A])
    m = alg.meet
    sets = {}
    for b in classes[B]:
        s = _sandwich(alg, xs, b, "meet")
        # A∧b∧A = {a∧b∧a | a ∈ A}
        if tuple(sorted(set(m[m[xs, b], xs].tolist()))) != s:
            raise CosetGeometryError("A∧b∧A differs from its one-sided description")
        sets[b] = s
    m_cosets = cosets(alg, A, M).cosets if A != M else (tuple(classes[M]),)
    for b in classes[B]:
        for mm in classes[M]:
            if ge[b, mm] and sets[b] != _sandwich(alg, xs, mm, "meet"):
                raise CosetGeometryError(f"A∧{b}∧A differs from A∧{mm}∧A although {b} ≥ {mm}")
        if sets[b] not in m_cosets:
            raise CosetGeometryError(f"A∧{b}∧A is not a coset of A in the meet class")
    if set(sets.values()) != set(m_cosets):
        raise CosetGeometryError("some coset of A in the meet class is missed")
    for b, b2 in itertools.combinations(classes[B], 2):
        if sets[b] == sets[b2] and not (m[m[xs, b], xs] == m[m[xs, b2], xs]).all():
            raise CosetGeometryError("equal generalized cosets give different sandwiches")
    blocks = tuple(sorted(set(sets.values()), key=lambda s: s[0]))
    co = natural_orders(alg).class_order
    omega = len(blocks[0]) if (co[A, B] or co[B, A]) else None
    return CosetDecomposition(A, M, "generalized", blocks, omega)


# -- coset bijections -------------------------------------------------------------------------

@dataclass(frozen=True)
class CosetBijection:
    source: tuple[int, ...]    # coset in the upper class
    target: tuple[int, ...]    # coset in the lower class
    pairs: tuple[tuple[int, int], ...]

    @property
    def forward(self) -> dict[int, int]:
        return dict(self.pairs)

    @property
    def inverse(self) -> dict[int, int]:
        return {b: a for a, b in self.pairs}

    def compose(self, after: "CosetBijection") -> dict[int, int]:
        """``after ∘ self`` as a partial map; points with no image are dropped."""
        f, g = self.forward, after.forward
        return {a: g[b] for a, b in f.items() if b in g}


def coset_bijections(alg: FiniteSkewLattice, upper: int, lower: int,
                     middle: tuple[int, ...] | None = None) -> list[CosetBijection]:
    """All coset bijections from D-class ``upper`` to D-class ``lower``.

    ``middle`` restricts the lower class to a subalgebra (an AC-component).
    """
    if not _class_above(alg, upper, lower):
        raise ClassesNotComparable(f"D-class {upper} is not above {lower}")
    gt = _strict_ge(alg)
    m, j = alg.meet, alg.join
    classes = _classes(alg)
    lower_elems = set(classes[lower] if middle is None else middle)
    src_cosets = _restricted_cosets(alg, lower, upper, lower_elems, "join")
    dst_cosets = _restricted_cosets(alg, upper, lower, lower_elems, "meet")
    out = []
    for X in src_cosets:
        for Y in dst_cosets:
            pairs = []
            for a in X:
                below = [b for b in Y if gt[a, b]]
                if len(below) != 1:
                    raise CosetGeometryError(f"{a} has {len(below)} images in a coset")
                b = below[0]
                for y in Y:
                    if m[m[a, y], a] != b:
                        raise CosetGeometryError("φ(a) ≠ a∧b∧a")
                for x in X:
                    if j[j[b, x], b] != a:
                        raise CosetGeometryError("φ⁻¹(b) ≠ b∨a∨b")
                pairs.append((a, b))
            if len({b for _, b in pairs}) != len(Y) or len(X) != len(Y):
                raise CosetGeometryError("coset map is not a bijection")
            phi = dict(pairs)
            for a1 in X:
                for a2 in X:
                    if phi[m[a1, a2]] != m[phi[a1], phi[a2]] or phi[j[a1, a2]] != j[phi[a1], phi[a2]]:
                        raise CosetGeometryError("coset bijection is not an isomorphism")
            out.append(CosetBijection(tuple(X), tuple(Y), tuple(pairs)))
    return out


def _restricted_cosets(alg, acting, target, allowed, op):
    """Cosets of ``acting`` inside ``target``, with the lower side limited to ``allowed``."""
    classes = _classes(alg)
    if op == "join":
        # cosets of the lower class (restricted) inside the upper class
        xs = [x for x in classes[acting] if x in allowed]
        sets = {_sandwich(alg, xs, y, "join") for y in classes[target]}
    else:
        sets = {_sandwich(alg, classes[acting], y, "meet") for y in classes[target] if y in allowed}
    return sorted(sets, key=lambda s: s[0])


# -- AC-components ------------------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentPartition:
    chain: SkewChain
    components: tuple[tuple[int, ...], ...]
    a_cosets: tuple[tuple[int, ...], ...]
    c_cosets: tuple[tuple[int, ...], ...]

    def component_of(self, b: int) -> tuple[int, ...]:
        for comp in self.components:
            if b in comp:
                return comp
        raise KeyError(b)


def _union_find(items, groups):
    parent = {x: x for x in items}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in groups:
        for x in g[1:]:
            ra, rb = find(g[0]), find(x)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    comps = {}
    for x in items:
        comps.setdefault(find(x), []).append(x)
    return tuple(sorted((tuple(sorted(c)) for c in comps.values()), key=lambda c: c[0]))


def ac_components(chain: SkewChain) -> ComponentPartition:
    alg = chain.alg
    a_cos = cosets(alg, chain.A, chain.B).cosets
    c_cos = cosets(alg, chain.C, chain.B).cosets
    comps = _union_find(chain.b_elems, list(a_cos) + list(c_cos))
    label = {x: i for i, comp in enumerate(comps) for x in comp}
    m, j = alg.meet, alg.join
    for comp in comps:
        s = set(comp)
        idx = np.array(comp)
        if not (set(m[np.ix_(idx, idx)].ravel().tolist()) <= s
                and set(j[np.ix_(idx, idx)].ravel().tolist()) <= s):
            raise CosetGeometryError("AC-component is not a subalgebra")
    for cos in a_cos + c_cos:
        if len({label[x] for x in cos}) != 1:
            raise CosetGeometryError("coset split across components")
    bs = chain.b_elems
    for b1 in bs:
        for b2 in bs:
            if label[b1] != label[b2]:
                continue
            for x in bs:
                for t in (m, j):
                    if label[t[b1, x]] != label[t[b2, x]] or label[t[x, b1]] != label[t[x, b2]]:
                        raise CosetGeometryError("AC-connectedness is not a congruence on B")
    return ComponentPartition(chain, comps, a_cos, c_cos)


# -- midpoints and images ----------------------------------------------------------------------------

@dataclass(frozen=True)
class MidpointSet:
    a: int
    c: int
    midpoints: tuple[int, ...]

    def __len__(self):
        return len(self.midpoints)


def _b1(alg, a, b, c):
    m, j = alg.meet, alg.join
    return int(m[m[a, j[j[c, b], c]], a])


def _b2(alg, a, b, c):
    m, j = alg.meet, alg.join
    return int(j[j[c, m[m[a, b], a]], c])


def midpoints(chain: SkewChain, a: int, c: int) -> MidpointSet:
    alg = chain.alg
    gt = _strict_ge(alg)
    if a not in chain.a_elems or c not in chain.c_elems:
        raise ValueError("a must lie in A and c in C")
    if not gt[a, c]:
        raise NotAbove(f"{alg.label(a)} is not above {alg.label(c)}")
    mids = tuple(b for b in chain.b_elems if gt[a, b] and gt[b, c])
    for b in chain.b_elems:
        for v in (_b1(alg, a, b, c), _b2(alg, a, b, c)):
            if v not in mids:
                raise CosetGeometryError("a sandwich formula missed the midpoint set")
    for b in mids:
        if _b1(alg, a, b, c) != b or _b2(alg, a, b, c) != b:
            raise CosetGeometryError("a sandwich formula moves a midpoint")
    idx = np.array(mids)
    m = alg.meet
    if not (set(m[np.ix_(idx, idx)].ravel().tolist()) <= set(mids)
            and set(alg.join[np.ix_(idx, idx)].ravel().tolist()) <= set(mids)
            and (m[m[idx[:, None], idx[None, :]], idx[:, None]] == idx[:, None]).all()):
        raise CosetGeometryError("midpoint set is not a rectangular subalgebra")
    return MidpointSet(a, c, mids)


@dataclass(frozen=True)
class ImageSet:
    element: int
    component: tuple[int, ...]
    images: tuple[int, ...]
    orthogonal: bool     # all images fall in one coset of the opposite class


def image_sets(chain: SkewChain, element: int) -> list[ImageSet]:
    """Images of an element of A (a∧B′∧a) or of C (c∨B′∨c) in each component B′."""
    alg = chain.alg
    gt = _strict_ge(alg)
    m, j = alg.meet, alg.join
    part = ac_components(chain)
    if element in chain.a_elems:
        upper, opposite = True, part.c_cosets
    elif element in chain.c_elems:
        upper, opposite = False, part.a_cosets
    else:
        raise ValueError("element is not in A or C")
    e = element
    out = []
    for comp in part.components:
        if upper:
            imgs = {int(m[m[e, b], e]) for b in comp}
            order_side = {b for b in comp if gt[e, b]}
        else:
            imgs = {int(j[j[e, b], e]) for b in comp}
            order_side = {b for b in comp if gt[b, e]}
        if imgs != order_side:
            raise CosetGeometryError("image set differs from its order description")
        touched = {c for c in opposite if imgs & set(c)}
        out.append(ImageSet(e, comp, tuple(sorted(imgs)), len(touched) == 1))
    return out


# -- chain-level checks ------------------------------------------------------------------------------

@dataclass
class ChainConditions:
    distributive: bool
    midpoint_equality: bool
    unique_midpoints: bool
    components_strict: bool
    components_strict_by_order: bool
    witness: dict = field(default_factory=dict)

    @property
    def agree(self) -> bool:
        vals = {self.distributive, self.midpoint_equality, self.unique_midpoints,
                self.components_strict, self.components_strict_by_order}
        return len(vals) == 1


def chain_distributive(chain: SkewChain) -> bool:
    sub = chain.subalgebra()
    return bool(holds(sub, MEET_DIST) and holds(sub, JOIN_DIST))


def _cosets_meet(part_a, part_c, comp):
    s = set(comp)
    ac = [c for c in part_a if set(c) <= s]
    cc = [c for c in part_c if set(c) <= s]
    return all(set(x) & set(y) for x in ac for y in cc)


def chain_conditions(chain: SkewChain) -> ChainConditions:
    """The four equivalent descriptions of a distributive skew chain, evaluated independently."""
    alg = chain.alg
    gt = _strict_ge(alg)
    part = ac_components(chain)
    pairs = [(a, c) for a in chain.a_elems for c in chain.c_elems if gt[a, c]]
    wit = {}
    dist = chain_distributive(chain)
    eq = True
    for a, c in pairs:
        for b in chain.b_elems:
            if _b1(alg, a, b, c) != _b2(alg, a, b, c):
                eq = False
                wit["midpoint_equality"] = (a, b, c)
                break
        if not eq:
            break
    uniq = True
    for a, c in pairs:
        mids = set(midpoints(chain, a, c).midpoints)
        for comp in part.components:
            if len(mids & set(comp)) != 1:
                uniq = False
                wit["unique_midpoints"] = (a, c, comp)
                break
        if not uniq:
            break
    strict = True
    strict_q = True
    for comp in part.components:
        sub = chain.subalgebra(comp)
        cat = bool(check_quasi_identity(sub, CATEGORICAL_Q))
        inter = _cosets_meet(part.a_cosets, part.c_cosets, comp)
        if not (cat and inter):
            strict = False
            wit.setdefault("components_strict", comp)
        if not check_quasi_identity(sub, STRICT_Q):
            strict_q = False
    return ChainConditions(dist, eq, uniq, strict, strict_q, wit)


@dataclass
class FactorizationReport:
    chain: SkewChain
    ok: bool
    factorizations: int           # (χ, component) cases examined
    failures: list = field(default_factory=list)


def verify_factorization(chain: SkewChain) -> FactorizationReport:
    """Every χ: A → C factors as ψ∘φ through each component, in exactly one way."""
    if not chain_distributive(chain):
        raise ChainNotDistributive(repr(chain))
    alg = chain.alg
    part = ac_components(chain)
    chis = coset_bijections(alg, chain.A, chain.C)
    failures = []
    count = 0
    for comp in part.components:
        phis = coset_bijections(alg, chain.A, chain.B, middle=comp)
        psis = [p for p in coset_bijections(alg, chain.B, chain.C) if set(p.source) <= set(comp)]
        for chi in chis:
            count += 1
            target = chi.forward
            found = [(phi, psi) for phi in phis for psi in psis if phi.compose(psi) == target]
            if len(found) != 1:
                failures.append((chi, comp, len(found)))
    return FactorizationReport(chain, not failures, count, failures)


def strictly_categorical_factorization(chain: SkewChain) -> bool:
    """Unique φ: A → B, ψ: B → C with χ = ψ∘φ for every χ, over the whole middle class."""
    alg = chain.alg
    chis = coset_bijections(alg, chain.A, chain.C)
    phis = coset_bijections(alg, chain.A, chain.B)
    psis = coset_bijections(alg, chain.B, chain.C)
    for chi in chis:
        found = sum(1 for phi in phis for psi in psis if phi.compose(psi) == chi.forward)
        if found != 1:
            return False
    return True


# -- DOT ---------------------------------------------------------------------------------------------------

def dot_coset_grid(chain: SkewChain) -> str:
    """Middle class of a chain: A-cosets as clusters, C-cosets as coloured edges."""
    alg = chain.alg
    part = ac_components(chain)
    lines = ["graph coset_grid {", "  node [shape=circle];"]
    for i, cos in enumerate(part.a_cosets):
        lines.append(f"  subgraph cluster_A{i} {{")
        lines.append('    label="A-coset"; style=dashed;')
        for b in cos:
            lines.append(f'    n{b} [label="{alg.label(b)}"];')
        lines.append("  }")
    for cos in part.c_cosets:
        for x, y in zip(cos, cos[1:]):
            lines.append(f"  n{x} -- n{y} [color=blue];")
    lines.append("}")
    return "\n".join(lines) + "\n"
