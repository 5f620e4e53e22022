"""Built-in benchmark algebras and constructors."""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .algebra import (FiniteSkewLattice, InvalidAlgebraError, format_algebra, parse_algebra,
                      validate)

SPINKS9_MEET = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 2, 3, 4, 5, 6, 7, 8],
    [0, 2, 2, 5, 6, 5, 6, 0, 0],
    [0, 3, 5, 3, 3, 5, 5, 7, 7],
    [0, 4, 6, 4, 4, 6, 6, 8, 8],
    [0, 5, 5, 5, 5, 5, 5, 0, 0],
    [0, 6, 6, 6, 6, 6, 6, 0, 0],
    [0, 7, 0, 7, 7, 0, 0, 7, 7],
    [0, 8, 0, 8, 8, 0, 0, 8, 8],
]
SPINKS9_JOIN = [
    [0, 1, 2, 3, 4, 5, 6, 7, 8],
    [1, 1, 1, 1, 1, 1, 1, 1, 1],
    [2, 1, 2, 1, 1, 2, 2, 1, 1],
    [3, 1, 1, 3, 4, 3, 4, 3, 4],
    [4, 1, 1, 3, 4, 3, 4, 3, 4],
    [5, 1, 2, 3, 4, 5, 6, 3, 4],
    [6, 1, 2, 3, 4, 5, 6, 3, 4],
    [7, 1, 1, 3, 4, 3, 4, 7, 8],
    [8, 1, 1, 3, 4, 3, 4, 7, 8],
]

U2_LABELS = ("a1", "a2", "b1", "b2", "b3", "b4", "d1", "d2", "d3", "d4", "c1", "c2")

BUILTIN_NAMES = ("m3", "n5", "spinks9", "spinks9_rh", "u2", "v2", "chain2", "chain3", "rect(m,n)")

# files shipped in skewlat/data; SKEWLAT_CORPUS_DIR overrides the directory
GOLDEN = {"spinks9": "spinks9.skt", "u2": "u2.skt", "v2": "v2.skt"}


class UnknownAlgebra(KeyError):
    pass


def lattice_from_order(leq, name="", labels=None) -> FiniteSkewLattice:
    """Lattice whose order is the boolean matrix ``leq[a, b] = a ≤ b``."""
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]
    meet = np.zeros((n, n), dtype=np.int64)
    join = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            lower = [c for c in range(n) if leq[c, a] and leq[c, b]]
            upper = [c for c in range(n) if leq[a, c] and leq[b, c]]
            glb = [c for c in lower if all(leq[d, c] for d in lower)]
            lub = [c for c in upper if all(leq[c, d] for d in upper)]
            if len(glb) != 1 or len(lub) != 1:
                raise ValueError("order is not a lattice")
            meet[a, b], join[a, b] = glb[0], lub[0]
    return FiniteSkewLattice(meet, join, name, labels)


def chain(n: int) -> FiniteSkewLattice:
    r = np.arange(n)
    return FiniteSkewLattice(np.minimum.outer(r, r), np.maximum.outer(r, r), f"chain{n}")


def rectangular(m: int, n: int) -> FiniteSkewLattice:
    """The m×n rectangular algebra on pairs (i, j) numbered i*n + j.

    (i,j) ∧ (k,l) = (i,l) and (i,j) ∨ (k,l) = (k,j); rect(m,1) is left-handed.
    """
    size = m * n
    r = np.arange(size)
    row, col = r // n, r % n
    meet = row[:, None] * n + col[None, :]
    join = row[None, :] * n + col[:, None]
    return FiniteSkewLattice(meet, join, f"rect({m},{n})")


def _m3():
    leq = np.eye(5, dtype=bool)
    leq[0, :] = True
    leq[:, 4] = True
    return lattice_from_order(leq, "m3")


def _n5():
    # 0 < 1 < 4, 0 < 3 < 2 < 4
    leq = np.eye(5, dtype=bool)
    leq[0, :] = True
    leq[:, 4] = True
    leq[3, 2] = True
    return lattice_from_order(leq, "n5")


def op_dual(alg: FiniteSkewLattice) -> FiniteSkewLattice:
    """Swap the two operations."""
    return FiniteSkewLattice(alg.join, alg.meet, _suffix(alg.name, "op"), alg.labels)


def transpose_dual(alg: FiniteSkewLattice) -> FiniteSkewLattice:
    """x ∘' y = y ∘ x for both operations."""
    return FiniteSkewLattice(alg.meet.T, alg.join.T, _suffix(alg.name, "tr"), alg.labels)


def _suffix(name, tag):
    return f"{name}_{tag}" if name else ""


def direct_product(a: FiniteSkewLattice, b: FiniteSkewLattice) -> FiniteSkewLattice:
    """Componentwise product; the pair (i, j) is numbered i*|b| + j."""
    na, nb = a.order, b.order
    r = np.arange(na * nb)
    ia, ib = r // nb, r % nb
    meet = a.meet[ia[:, None], ia[None, :]] * nb + b.meet[ib[:, None], ib[None, :]]
    join = a.join[ia[:, None], ia[None, :]] * nb + b.join[ib[:, None], ib[None, :]]
    labels = None
    if a.labels or b.labels:
        labels = tuple(f"({a.label(i)},{b.label(j)})" for i, j in zip(ia, ib))
    name = f"{a.name}x{b.name}" if a.name and b.name else ""
    return FiniteSkewLattice(meet, join, name, labels)


# -- coset-specified skew chains -------------------------------------------------------

@dataclass
class PairSpec:
    """Coset data between an upper class and a lower class of a chain.

    ``upper_cosets`` partitions the upper class into cosets of the lower class,
    ``lower_cosets`` partitions the lower class into cosets of the upper class
    (local indices).  ``pairing[(k, l)]`` maps each element of upper coset k
    to the element of lower coset l below it; by default the i-th listed
    member of one coset is paired with the i-th listed member of the other.
    """
    upper_cosets: list[list[int]]
    lower_cosets: list[list[int]]
    pairing: dict[tuple[int, int], dict[int, int]] | None = None

    def resolved_pairing(self):
        if self.pairing is not None:
            return self.pairing
        return {(k, l): dict(zip(X, Y))
                for k, X in enumerate(self.upper_cosets)
                for l, Y in enumerate(self.lower_cosets)}


@dataclass
class CosetSpec:
    """A skew chain given by class sizes (top class first) and, for every pair
    of classes ``i < j``, the coset data between them."""
    sizes: list[int]
    pairs: dict[tuple[int, int], PairSpec]
    handedness: str = "left"
    name: str = ""
    labels: tuple[str, ...] | None = None
    _checked: bool = field(default=False, repr=False)

    def check(self):
        k = len(self.sizes)
        for i in range(k):
            for j in range(i + 1, k):
                if (i, j) not in self.pairs:
                    raise ValueError(f"missing coset data for classes {i} > {j}")
                p = self.pairs[(i, j)]
                for part, size, what in ((p.upper_cosets, self.sizes[i], "upper"),
                                         (p.lower_cosets, self.sizes[j], "lower")):
                    flat = sorted(e for block in part for e in block)
                    if flat != list(range(size)):
                        raise ValueError(f"{what} cosets for ({i},{j}) do not partition the class")
                sizes = {len(b) for b in p.upper_cosets} | {len(b) for b in p.lower_cosets}
                if len(sizes) != 1:
                    raise ValueError(f"coset blocks for ({i},{j}) have unequal sizes {sorted(sizes)}")
                pairing = p.resolved_pairing()
                for kk, X in enumerate(p.upper_cosets):
                    for ll, Y in enumerate(p.lower_cosets):
                        f = pairing.get((kk, ll))
                        if f is None or sorted(f) != sorted(X) or sorted(f.values()) != sorted(Y):
                            raise ValueError(f"pairing ({kk},{ll}) of classes ({i},{j}) is not a bijection")
        if self.handedness not in ("left", "right"):
            raise ValueError("handedness must be 'left' or 'right'")


def from_coset_spec(spec: CosetSpec, validate_result: bool = True) -> FiniteSkewLattice:
    """Operation tables of the skew chain described by ``spec``.

    Between comparable classes, x ∧ y is the partner of x in the coset of y
    and x ∨ y the partner of y in the coset of x (left-handed rule inside the
    classes); a right-handed spec is built left-handed and transposed.
    """
    spec.check()
    offsets = np.concatenate([[0], np.cumsum(spec.sizes)]).astype(int)
    n = int(offsets[-1])
    cls = np.repeat(np.arange(len(spec.sizes)), spec.sizes)
    meet = np.zeros((n, n), dtype=np.int64)
    join = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            if cls[x] == cls[y]:
                meet[x, y], join[x, y] = x, y
    for (i, j), p in spec.pairs.items():
        pairing = p.resolved_pairing()
        ucos = {e: k for k, block in enumerate(p.upper_cosets) for e in block}
        lcos = {e: l for l, block in enumerate(p.lower_cosets) for e in block}
        for xl in range(spec.sizes[i]):
            for yl in range(spec.sizes[j]):
                f = pairing[(ucos[xl], lcos[yl])]
                down = f[xl]
                up = next(u for u, d in f.items() if d == yl)
                x, y = offsets[i] + xl, offsets[j] + yl
                meet[x, y] = offsets[j] + down
                meet[y, x] = y
                join[x, y] = offsets[i] + up
                join[y, x] = x
    if spec.handedness == "right":
        meet, join = meet.T, join.T
    alg = FiniteSkewLattice(meet, join, spec.name, spec.labels)
    if validate_result:
        rep = validate(alg)
        if not rep.ok:
            raise InvalidAlgebraError(f"incoherent coset spec: {rep.first_failure}")
    return alg


def u2_spec(handedness="left") -> CosetSpec:
    # A = {a1,a2}, B = {b1..b4, d1..d4}, C = {c1,c2}; b_i, d_j share a C-coset iff i+j ≡ 0 mod 4
    ab = PairSpec([[0, 1]], [[0, 1], [2, 3], [4, 5], [6, 7]])
    bc_cosets = []
    for i in range(1, 5):
        jd = (-i) % 4 or 4
        bc_cosets.append([i - 1, 4 + jd - 1])
    bc = PairSpec(bc_cosets, [[0, 1]])
    ac = PairSpec([[0], [1]], [[0], [1]])
    name = "u2" if handedness == "left" else "v2"
    return CosetSpec([2, 8, 2], {(0, 1): ab, (1, 2): bc, (0, 2): ac}, handedness, name, U2_LABELS)


def two_block_chain() -> FiniteSkewLattice:
    """A > B > C with |A| = |C| = 1 and B = {b1, b2} split into two components."""
    spec = CosetSpec([1, 2, 1], {
        (0, 1): PairSpec([[0]], [[0], [1]]),
        (1, 2): PairSpec([[0], [1]], [[0]]),
        (0, 2): PairSpec([[0]], [[0]]),
    }, "left", "two_block_chain", ("a", "b1", "b2", "c"))
    return from_coset_spec(spec)


# -- builtins ---------------------------------------------------------------------------

def corpus_dir() -> Path:
    env = os.environ.get("SKEWLAT_CORPUS_DIR")
    if env:
        return Path(env)
    return Path(str(resources.files("skewlat") / "data"))


def _golden(name):
    path = corpus_dir() / GOLDEN[name]
    if path.exists():
        return parse_algebra(path.read_text(encoding="utf-8"))
    return None


def builtin(name: str) -> FiniteSkewLattice:
    """A validated built-in algebra by name."""
    key = name.strip().lower()
    m = re.fullmatch(r"rect\(?\s*(\d+)\s*[,x]\s*(\d+)\s*\)?", key)
    if m:
        alg = rectangular(int(m.group(1)), int(m.group(2)))
    elif key == "m3":
        alg = _m3()
    elif key == "n5":
        alg = _n5()
    elif key in ("chain2", "chain3"):
        alg = chain(int(key[-1]))
    elif key == "spinks9":
        alg = _golden("spinks9") or FiniteSkewLattice(SPINKS9_MEET, SPINKS9_JOIN, "spinks9")
    elif key == "spinks9_rh":
        alg = transpose_dual(builtin("spinks9"))
        alg = FiniteSkewLattice(alg.meet, alg.join, "spinks9_rh")
    elif key in ("u2", "v2"):
        alg = _golden(key) or from_coset_spec(u2_spec("left" if key == "u2" else "right"))
    else:
        raise UnknownAlgebra(name)
    rep = validate(alg)
    if not rep.ok:
        raise InvalidAlgebraError(f"builtin {name} fails validation: {rep.first_failure}")
    return alg


def builtin_names() -> list[str]:
    return list(BUILTIN_NAMES)


def corpus(include_products: bool = True) -> list[FiniteSkewLattice]:
    """Every fixed algebra the test suite and harness run over."""
    names = ["chain2", "chain3", "m3", "n5", "spinks9", "spinks9_rh", "u2", "v2",
             "rect(1,1)", "rect(2,1)", "rect(1,2)", "rect(2,2)", "rect(3,2)"]
    algs = [builtin(n) for n in names]
    s9 = builtin("spinks9")
    extra = [
        op_dual(s9),
        transpose_dual(op_dual(s9)),
        two_block_chain(),
        chain(4),
    ]
    if include_products:
        extra.append(direct_product(s9, transpose_dual(op_dual(s9))))
        extra.append(direct_product(builtin("rect(2,1)"), chain(2)))
        extra.append(direct_product(builtin("rect(1,2)"), builtin("rect(2,1)")))
        extra.append(direct_product(builtin("m3"), builtin("rect(2,1)")))
    return algs + extra


def emit(name: str) -> str:
    return format_algebra(builtin(name))
