"""Canonical forms and isomorphism testing for finite skew lattices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import FiniteSkewLattice
from .subalgebras import find_embedding


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Permutation-minimal big-endian encoding of the (meet, join) pair."""
    order: int
    code: bytes

    def algebra(self, name: str = "") -> FiniteSkewLattice:
        n = self.order
        arr = np.frombuffer(self.code, dtype=">u2").astype(np.int64)
        return FiniteSkewLattice(arr[: n * n].reshape(n, n),
                                 arr[n * n: 2 * n * n].reshape(n, n), name)

    def hex(self) -> str:
        return f"{self.order}:{self.code.hex()}"


def _ranks(keys: np.ndarray) -> np.ndarray:
    """Dense ranks of the rows of a 2-D key array in lexicographic order."""
    _, inv = np.unique(keys, axis=0, return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


def _initial_colours(alg: FiniteSkewLattice, colours=None) -> np.ndarray:
    """Label-invariant start colouring: D-, R- and L-class sizes, down-set sizes."""
    m, j = alg.meet, alg.join
    n = alg.order
    eye = np.arange(n)
    mt = m.T
    # R: a∧b=b, b∧a=a ; L: a∧b=a, b∧a=b ; D: a∧b∧a=a, b∧a∧b=b
    r = (m == eye[None, :]) & (mt == eye[:, None])
    lrel = (m == eye[:, None]) & (mt == eye[None, :])
    aba = m[eye[:, None], m.T]  # aba[a, b] = (a∧b)∧a
    d = (aba == eye[:, None]) & (aba.T == eye[None, :])
    below = (m == eye[None, :]) & (mt == eye[None, :])  # b ≤ a in the natural order
    pre_below = (j[j, eye[:, None]] == eye[:, None])  # a∨b∨a = a
    cols = [d.sum(1), r.sum(1), lrel.sum(1), below.sum(1), below.sum(0),
            pre_below.sum(1), pre_below.sum(0),
            (m == eye[:, None]).sum(1), (j == eye[:, None]).sum(1)]
    if colours is not None:
        cols.insert(0, np.asarray(colours, dtype=np.int64))
    return _ranks(np.stack(cols, axis=1))


def _refine(alg: FiniteSkewLattice, colour: np.ndarray) -> np.ndarray:
    m, j = alg.meet, alg.join
    n = alg.order
    k = n + 1
    while True:
        c = colour
        keys = (((c[None, :] * k + c[m]) * k + c[m.T]) * k + c[j]) * k + c[j.T]
        keys = np.sort(keys, axis=1)
        new = _ranks(np.concatenate([c[:, None], keys], axis=1))
        if new.max() == c.max():
            return new
        colour = new


def _encode(alg: FiniteSkewLattice, pos: np.ndarray, colours=None) -> bytes:
    inv = np.empty_like(pos)
    inv[pos] = np.arange(len(pos))
    meet = pos[alg.meet[np.ix_(inv, inv)]]
    join = pos[alg.join[np.ix_(inv, inv)]]
    parts = [meet.ravel(), join.ravel()]
    if colours is not None:
        parts.append(np.asarray(colours, dtype=np.int64)[inv])
    return np.concatenate(parts).astype(">u2").tobytes()


def canonical_labeling(alg: FiniteSkewLattice, colours=None) -> tuple[CanonicalForm, np.ndarray]:
    """Canonical form and a permutation ``pos`` (element x goes to pos[x]) realising it.

    Optional integer ``colours`` must be preserved by isomorphisms and are part of the code.

    Individualisation-refinement: refine a label-invariant colouring, branch on
    every element of the first non-singleton cell, keep the minimal encoding of
    all discrete leaves.  Branches equivalent under automorphisms already found
    (fixing the current path pointwise) are skipped.
    """
    n = alg.order
    if n > 65535:
        raise ValueError("order too large for canonical encoding")
    start = _refine(alg, _initial_colours(alg, colours))
    best: list = [None, None]
    autos: list[np.ndarray] = []

    def leaf(colour):
        code = _encode(alg, colour, colours)
        if best[0] is None or code < best[0]:
            best[0], best[1] = code, colour.copy()
        elif code == best[0]:
            # colour and best[1] give the same table: inverse(best) ∘ colour is an automorphism
            inv = np.empty_like(best[1])
            inv[best[1]] = np.arange(n)
            autos.append(inv[colour])

    def search(colour, path):
        counts = np.bincount(colour, minlength=n)
        if counts.max() == 1:
            leaf(colour)
            return
        target = int(np.flatnonzero(counts > 1)[0])
        cell = np.flatnonzero(colour == target)
        seen: set[int] = set()
        for x in cell.tolist():
            if x in seen:
                continue
            c2 = colour * 2
            c2[x] += 1
            search(_refine(alg, _ranks(c2[:, None])), path + [x])
            # orbit of x under automorphisms found so far that fix the path
            stab = [a for a in autos if all(a[p] == p for p in path)]
            orbit, frontier = {x}, [x]
            while frontier:
                y = frontier.pop()
                for a in stab:
                    z = int(a[y])
                    if z not in orbit:
                        orbit.add(z)
                        frontier.append(z)
            seen |= orbit

    search(start, [])
    return CanonicalForm(n, best[0]), best[1]


def canonical_form(alg: FiniteSkewLattice, colours=None) -> CanonicalForm:
    return canonical_labeling(alg, colours)[0]


def canonical_algebra(alg: FiniteSkewLattice) -> FiniteSkewLattice:
    form, pos = canonical_labeling(alg)
    return alg.relabel(pos)


def find_isomorphism(a: FiniteSkewLattice, b: FiniteSkewLattice) -> dict[int, int] | None:
    """Explicit isomorphism a → b by backtracking, independent of canonical forms."""
    if a.order != b.order:
        return None
    return find_embedding(b, a)


def is_isomorphic(a: FiniteSkewLattice, b: FiniteSkewLattice) -> bool:
    return find_isomorphism(a, b) is not None
