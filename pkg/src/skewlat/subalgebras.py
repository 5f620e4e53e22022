"""Subalgebra closure, enumeration and embedding search."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import FiniteSkewLattice, ensure_valid, load_algebra


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Subalgebra:
    parent: FiniteSkewLattice
    elements: tuple[int, ...]

    def algebra(self) -> FiniteSkewLattice:
        return self.parent.restrict(self.elements)

    def __len__(self):
        return len(self.elements)


def _close_mask(meet, join, mask, n):
    members = [i for i in range(n) if mask >> i & 1]
    frontier = list(members)
    while frontier:
        new = []
        for x in frontier:
            for y in members:
                for v in (meet[x, y], meet[y, x], join[x, y], join[y, x]):
                    if not mask >> v & 1:
                        mask |= 1 << v
                        new.append(v)
        members.extend(new)
        frontier = new
    return mask


def _mask(elems):
    out = 0
    for e in elems:
        out |= 1 << int(e)
    return out


def _elems(mask, n):
    return tuple(i for i in range(n) if mask >> i & 1)


def closure(alg: FiniteSkewLattice, seed) -> Subalgebra:
    seed = list(seed)
    if not seed:
        raise ValueError("seed must be nonempty")
    mask = _close_mask(_Tab(alg.meet), _Tab(alg.join), _mask(seed), alg.order)
    return Subalgebra(alg, _elems(mask, alg.order))


class _Tab:
    """Nested-list table indexable as t[x, y]; faster than numpy for scalar lookups."""
    __slots__ = ("rows",)

    def __init__(self, arr):
        self.rows = arr.tolist()

    def __getitem__(self, key):
        x, y = key
        return self.rows[x][y]


def all_subalgebras(alg: FiniteSkewLattice, cap: int = 10) -> list[Subalgebra]:
    """Every nonempty subalgebra, sorted by size then elements."""
    n = alg.order
    if n > cap:
        raise CapExceeded(f"order {n} exceeds subalgebra cap {cap}")
    meet, join = _Tab(alg.meet), _Tab(alg.join)
    found = set()
    frontier = []
    seeds = [(i,) for i in range(n)]
    seeds += [(i, j) for i in range(n) for j in range(i + 1, n)]
    seeds += [(i, j, k) for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n)]
    for s in seeds:
        m = _close_mask(meet, join, _mask(s), n)
        if m not in found:
            found.add(m)
            frontier.append(m)
    while frontier:
        nxt = []
        for m in frontier:
            for e in range(n):
                if not m >> e & 1:
                    m2 = _close_mask(meet, join, m | 1 << e, n)
                    if m2 not in found:
                        found.add(m2)
                        nxt.append(m2)
        frontier = nxt
    subs = sorted((_elems(m, n) for m in found), key=lambda t: (len(t), t))
    return [Subalgebra(alg, s) for s in subs]


def is_closed(alg: FiniteSkewLattice, elems) -> bool:
    idx = np.array(sorted(set(int(e) for e in elems)))
    s = set(idx.tolist())
    return (set(alg.meet[np.ix_(idx, idx)].ravel().tolist()) <= s
            and set(alg.join[np.ix_(idx, idx)].ravel().tolist()) <= s)


# -- embeddings ----------------------------------------------------------------------------------

def _search_order(pattern: FiniteSkewLattice):
    """Pattern elements by descending degree, then greedily by links to chosen ones."""
    k = pattern.order
    pm, pj = pattern.meet, pattern.join
    link = np.zeros((k, k), dtype=np.int64)
    for p in range(k):
        for q in range(k):
            if p != q:
                for v in (pm[p, q], pj[p, q]):
                    if v != p:
                        link[p, q] += 1
                        link[q, p] += 1
    deg = link.sum(axis=1)
    order = [int(np.argmax(deg))]
    rest = set(range(k)) - set(order)
    while rest:
        best = max(rest, key=lambda p: (link[p, order].sum(), deg[p], -p))
        order.append(best)
        rest.remove(best)
    return order


def find_embedding(alg: FiniteSkewLattice, pattern: FiniteSkewLattice) -> dict[int, int] | None:
    """An injective homomorphism pattern → alg, or None after exhaustive search."""
    k, n = pattern.order, alg.order
    if k > n:
        return None
    pm, pj = _Tab(pattern.meet), _Tab(pattern.join)
    am, aj = _Tab(alg.meet), _Tab(alg.join)
    order = _search_order(pattern)
    f = [-1] * k
    used = [False] * n

    def assign(p, x, trail):
        """Set f(p) = x and propagate forced images; False on conflict."""
        queue = [(p, x)]
        while queue:
            p, x = queue.pop()
            if f[p] >= 0:
                if f[p] != x:
                    return False
                continue
            if used[x]:
                return False
            f[p] = x
            used[x] = True
            trail.append(p)
            for q in range(k):
                y = f[q]
                if y < 0:
                    continue
                for pt, at in ((pm, am), (pj, aj)):
                    for r, v in ((pt[p, q], at[x, y]), (pt[q, p], at[y, x])):
                        if f[r] >= 0:
                            if f[r] != v:
                                return False
                        else:
                            queue.append((r, v))
        return True

    def undo(trail):
        for p in trail:
            used[f[p]] = False
            f[p] = -1

    def rec(i):
        while i < k and f[order[i]] >= 0:
            i += 1
        if i == k:
            return True
        p = order[i]
        for x in range(n):
            if used[x]:
                continue
            trail = []
            if assign(p, x, trail) and rec(i + 1):
                return True
            undo(trail)
        return False

    if rec(0):
        emb = {p: f[p] for p in range(k)}
        if not is_embedding(alg, pattern, emb):
            raise AssertionError("embedding search returned a non-homomorphism")
        return emb
    return None


def is_embedding(alg, pattern, emb) -> bool:
    k = pattern.order
    if sorted(emb) != list(range(k)) or len(set(emb.values())) != k:
        return False
    for p in range(k):
        for q in range(k):
            if emb[int(pattern.meet[p, q])] != alg.meet[emb[p], emb[q]]:
                return False
            if emb[int(pattern.join[p, q])] != alg.join[emb[p], emb[q]]:
                return False
    return True


def pattern(name_or_path: str) -> FiniteSkewLattice:
    """m3, n5, spinks9 or a path to an algebra file."""
    from .corpus import UnknownAlgebra, builtin
    try:
        return builtin(name_or_path)
    except UnknownAlgebra:
        return ensure_valid(load_algebra(name_or_path))
