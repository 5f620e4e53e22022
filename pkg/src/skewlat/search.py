"""Constrained enumeration of finite skew lattices and counterexample search.

The search fixes a D-class skeleton first: a lattice L (the image S/D, up to
isomorphism), a size for every class and a rectangular shape rows x cols for
every class.  Elements are numbered class by class along a linear extension
of L (bottom class first), so the in-class tables are determined and every
cross-class cell x∧y (x∨y) ranges only over the class over X∧Y (X∨Y).  The
remaining cells are filled by a backtracking kernel that checks associativity
and absorption on every assignment and the required identities whenever all
cells below a given element index are known.
"""
from __future__ import annotations

import builtins
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from ._accel import njit
from .algebra import FiniteSkewLattice, format_algebra, holds, check_quasi_identity, validate
from .canonical import CanonicalForm, canonical_form
from .green import handedness, lattice_image, relation_D
from .identities import (CANCEL, CATEGORICAL_Q, EMCC, JOIN_DIST, LINEAR, LOWER_SYM, MEET_DIST,
                         NORMAL, SIMPLE_CANCEL, STRICT_Q, UPPER_SYM)
from .kernels import pack_programs
from .properties import PropertyId, check
from .terms import Identity, QuasiIdentity, compile_term, identity_dual, parse_identity, parse_quasi

P = PropertyId
UNCONSTRAINED_MAX_ORDER = 12
DEFAULT_TIMEOUT = 600.0
CHUNK_NODES = 2_000_000
SOLUTION_BUFFER = 512
KERNEL_MAX_ARITY = 4


class SearchError(ValueError):
    pass


# -- constraints -----------------------------------------------------------------------------------

Constraint = PropertyId | Identity | QuasiIdentity


def parse_constraint(item) -> Constraint:
    """A PropertyId name, or a raw identity ``lhs = rhs`` / quasi-identity ``... => ...``."""
    if isinstance(item, (PropertyId, Identity, QuasiIdentity)):
        return item
    text = str(item).strip()
    if "=>" in text:
        return parse_quasi(text, text)
    if "=" in text:
        return parse_identity(text, text)
    return PropertyId.parse(text)


def _constraint_name(c: Constraint) -> str:
    if isinstance(c, PropertyId):
        return c.value
    return c.label or str(c)


@dataclass(frozen=True)
class SearchConstraint:
    order: int
    require: tuple = ()
    forbid: tuple = ()
    handedness: str | None = None
    chain_shape: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "require", tuple(parse_constraint(c) for c in self.require))
        object.__setattr__(self, "forbid", tuple(parse_constraint(c) for c in self.forbid))
        names_r = {_constraint_name(c) for c in self.require}
        names_f = {_constraint_name(c) for c in self.forbid}
        if names_r & names_f:
            raise SearchError(f"require and forbid overlap: {sorted(names_r & names_f)}")
        if self.handedness not in (None, "left", "right"):
            raise SearchError("handedness must be left, right or omitted")
        if self.chain_shape is not None:
            shape = tuple(int(s) for s in self.chain_shape)
            if not shape or min(shape) < 1:
                raise SearchError("chain_shape needs positive class sizes")
            object.__setattr__(self, "chain_shape", shape)
            if sum(shape) != self.order:
                raise SearchError(f"chain_shape sums to {sum(shape)}, not the order {self.order}")
        if self.order < 1:
            raise SearchError("order must be positive")
        if (self.order > UNCONSTRAINED_MAX_ORDER and self.chain_shape is None
                and self.handedness is None):
            raise SearchError(f"orders above {UNCONSTRAINED_MAX_ORDER} need a chain shape "
                              "or a handedness restriction")

    def to_json(self) -> dict:
        return {"order": self.order,
                "require": [_constraint_name(c) for c in self.require],
                "forbid": [_constraint_name(c) for c in self.forbid],
                "handedness": self.handedness,
                "chain_shape": list(self.chain_shape) if self.chain_shape else None}


_PRUNE: dict[PropertyId, tuple] = {
    P.DISTRIBUTIVE: (MEET_DIST, JOIN_DIST),
    P.MEET_DISTRIBUTIVE: (MEET_DIST,),
    P.JOIN_DISTRIBUTIVE: (JOIN_DIST,),
    P.SYMMETRIC: (UPPER_SYM, LOWER_SYM),
    P.UPPER_SYMMETRIC: (UPPER_SYM,),
    P.LOWER_SYMMETRIC: (LOWER_SYM,),
    P.CANCELLATIVE: CANCEL,
    P.SIMPLY_CANCELLATIVE: (SIMPLE_CANCEL,),
    P.LINEARLY_DISTRIBUTIVE: (LINEAR,),
    P.CATEGORICAL: (CATEGORICAL_Q,),
    P.STRICTLY_CATEGORICAL: (STRICT_Q,),
    P.NORMAL: (NORMAL,),
    P.EMCC: (EMCC,),
    P.EJCC: (identity_dual(EMCC),),
    P.RELATIVELY_DISTRIBUTIVE: (LINEAR, EMCC, identity_dual(EMCC)),
}


def _equations(c) -> tuple[list[tuple], int]:
    if isinstance(c, Identity):
        return [(c.lhs, c.rhs)], c.arity
    return [*c.premises, c.conclusion], c.variable_count


def _kernel_groups(items) -> list[tuple]:
    """Each constraint as a group of identities/quasi-identities whose conjunction is exact."""
    out = []
    for c in items:
        if isinstance(c, PropertyId):
            if c in _PRUNE:
                out.append(_PRUNE[c])
        else:
            out.append((c,))
    return out


@dataclass
class _Compiled:
    codes: np.ndarray
    starts: np.ndarray
    lens: np.ndarray
    con_eq0: np.ndarray
    con_neq: np.ndarray
    con_nvars: np.ndarray
    con_group: np.ndarray
    n_forbid: int


def _compile(constraint: SearchConstraint) -> _Compiled:
    programs, eq0, neq, nv, grp = [], [], [], [], []

    def add(c, group):
        eqs, arity = _equations(c)
        if arity > KERNEL_MAX_ARITY:
            return
        eq0.append(len(programs) // 2)
        neq.append(len(eqs))
        nv.append(max(arity, 1))
        grp.append(group)
        for a, b in eqs:
            programs.append(compile_term(a))
            programs.append(compile_term(b))

    for g in _kernel_groups(constraint.require):
        for c in g:
            add(c, -1)
    n_forbid = 0
    for g in _kernel_groups(constraint.forbid):
        arities = [_equations(c)[1] for c in g]
        if max(arities) > KERNEL_MAX_ARITY:
            continue
        for c in g:
            add(c, n_forbid)
        n_forbid += 1
    if programs:
        codes, starts, lens = pack_programs(programs)
    else:
        codes = starts = lens = np.zeros(0, dtype=np.int64)
    arr = lambda xs: np.asarray(xs, dtype=np.int64)
    return _Compiled(codes, starts, lens, arr(eq0), arr(neq), arr(nv), arr(grp), n_forbid)


# -- lattices ----------------------------------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """A finite lattice numbered along a linear extension (0 bottom, k-1 top)."""
    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    def algebra(self) -> FiniteSkewLattice:
        return FiniteSkewLattice(self.meet, self.join)

    def is_distributive(self) -> bool:
        m, j = self.meet, self.join
        left = m[np.arange(self.size)[:, None, None], j[None, :, :]]
        right = j[m[:, :, None], m[:, None, :]]
        return bool((left == right).all())

    def is_chain(self) -> bool:
        return bool((self.leq | self.leq.T).all())


def _lattice_from_leq(leq: np.ndarray) -> Lattice:
    k = leq.shape[0]
    meet = np.empty((k, k), dtype=np.int64)
    join = np.empty((k, k), dtype=np.int64)
    idx = np.arange(k)
    for a in range(k):
        for b in range(k):
            meet[a, b] = idx[leq[:, a] & leq[:, b]].max()
            join[a, b] = idx[leq[a, :] & leq[b, :]].min()
    leq = leq.copy()
    for t in (leq, meet, join):
        t.setflags(write=False)
    return Lattice(leq, meet, join)


def _extend_semilattices(semis: list[np.ndarray]) -> list[np.ndarray]:
    """All meet-semilattices obtained by adding one new maximal element."""
    out = []
    for leq in semis:
        s = leq.shape[0]
        for mask in range(1, 1 << s):
            if not mask & 1:
                continue  # the bottom is below everything
            d = np.array([(mask >> i) & 1 for i in range(s)], dtype=bool)
            # down-closed
            if (leq[:, d].any(axis=1) & ~d).any():
                continue
            ok = True
            for t in range(s):
                below = np.flatnonzero(d & leq[:, t])
                top = below.max()
                if not leq[below, top].all():
                    ok = False
                    break
            if not ok:
                continue
            new = np.zeros((s + 1, s + 1), dtype=bool)
            new[:s, :s] = leq
            new[:s, s] = d
            new[s, s] = True
            out.append(new)
    return out


@lru_cache(maxsize=None)
def _semilattices(size: int) -> tuple:
    """Meet-semilattices up to isomorphism, numbered along a linear extension."""
    if size == 1:
        return (np.ones((1, 1), dtype=bool),)
    seen: dict[CanonicalForm, np.ndarray] = {}
    for leq in _extend_semilattices(list(_semilattices(size - 1))):
        lat = _lattice_from_leq(_add_top(leq))
        key = canonical_form(lat.algebra())
        seen.setdefault(key, leq)
    return tuple(seen[k] for k in sorted(seen))


def _add_top(leq):
    s = leq.shape[0]
    new = np.ones((s + 1, s + 1), dtype=bool)
    new[:s, :s] = leq
    new[s, :s] = False
    return new


@lru_cache(maxsize=None)
def lattices(k: int) -> tuple[Lattice, ...]:
    """All lattices with k elements up to isomorphism (finite meet-semilattice plus a top)."""
    if k < 1:
        return ()
    if k == 1:
        return (_lattice_from_leq(np.ones((1, 1), dtype=bool)),)
    return tuple(_lattice_from_leq(_add_top(leq)) for leq in _semilattices(k - 1))


def chain_lattice(k: int) -> Lattice:
    return _lattice_from_leq(np.tril(np.ones((k, k), dtype=bool)).T)


# -- skeletons -----------------------------------------------------------------------------------------

@dataclass(frozen=True)
class Skeleton:
    lattice: Lattice
    sizes: tuple[int, ...]
    shapes: tuple[tuple[int, int], ...]

    @property
    def order(self) -> int:
        return sum(self.sizes)

    def describe(self) -> dict:
        return {"classes": len(self.sizes), "sizes": list(self.sizes),
                "shapes": [list(s) for s in self.shapes],
                "lattice_leq": self.lattice.leq.astype(int).tolist()}


def _compositions(n, k):
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0, *cuts, n)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(k))


def _shapes(size, hand):
    if hand == "left":
        return [(size, 1)]
    if hand == "right":
        return [(1, size)]
    return [(r, size // r) for r in range(1, size + 1) if size % r == 0]


def _qd_filter(constraint):
    """True/False if the lattice image must (not) be distributive, None otherwise."""
    if P.QUASI_DISTRIBUTIVE in constraint.require:
        return True
    if P.QUASI_DISTRIBUTIVE in constraint.forbid:
        return False
    return None


def _required_identities(constraint):
    out = []
    for g in _kernel_groups(constraint.require):
        out.extend(c for c in g if isinstance(c, Identity))
    return out


@lru_cache(maxsize=None)
def _rect(r, c):
    from .corpus import rectangular
    return rectangular(r, c)


def _passes(alg, idents):
    return all(holds(alg, i) for i in idents)


def skeletons(constraint: SearchConstraint) -> list[Skeleton]:
    """D-class skeletons for a constraint, one per isomorphism type.

    Required identities pass to the lattice image and to every D-class, so
    skeletons whose lattice or class shapes violate one are dropped.
    """
    n, hand = constraint.order, constraint.handedness
    want_qd = _qd_filter(constraint)
    idents = _required_identities(constraint)
    shape_ok = lru_cache(maxsize=None)(lambda r, c: _passes(_rect(r, c), idents))

    def shapes_for(size):
        return [s for s in _shapes(size, hand) if shape_ok(*s)]

    if constraint.chain_shape is not None:
        sizes = tuple(reversed(constraint.chain_shape))
        lat = chain_lattice(len(sizes))
        if want_qd is False or not _passes(lat.algebra(), idents):
            return []
        return [Skeleton(lat, sizes, shp)
                for shp in itertools.product(*(shapes_for(s) for s in sizes))]
    out, seen = [], set()
    for k in range(1, n + 1):
        for lat in lattices(k):
            if want_qd is not None and lat.is_distributive() != want_qd:
                continue
            lat_alg = lat.algebra()
            if not _passes(lat_alg, idents):
                continue
            for sizes in _compositions(n, k):
                for shp in itertools.product(*(shapes_for(s) for s in sizes)):
                    colours = [s[0] * (n + 1) + s[1] for s in shp]
                    key = canonical_form(lat_alg, colours)
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(Skeleton(lat, sizes, shp))
    return out


# -- the kernel ----------------------------------------------------------------------------------------

@njit(cache=True)
def _peval(M, J, codes, start, length, assign, stack):
    sp = 0
    for k in range(start, start + length):
        c = codes[k]
        if c >= 0:
            stack[sp] = assign[c]
            sp += 1
        else:
            b = stack[sp - 1]
            a = stack[sp - 2]
            sp -= 1
            if a < 0 or b < 0:
                stack[sp - 1] = -1
            elif c == -1:
                stack[sp - 1] = M[a, b]
            else:
                stack[sp - 1] = J[a, b]
    return stack[0]


@njit(cache=True)
def _con_ok(M, J, codes, starts, lens, eq0, neq, nvars, kmax, assign, stack):
    """False iff some assignment with entries ≤ kmax fully evaluates to a violation."""
    base = kmax + 1
    last = eq0 + neq - 1
    for i in range(nvars):
        assign[i] = 0
    while True:
        for e in range(eq0, eq0 + neq):
            a = _peval(M, J, codes, starts[2 * e], lens[2 * e], assign, stack)
            if a < 0:
                break
            b = _peval(M, J, codes, starts[2 * e + 1], lens[2 * e + 1], assign, stack)
            if b < 0:
                break
            if a != b:
                if e == last:
                    return False
                break
        j = nvars - 1
        while j >= 0:
            assign[j] += 1
            if assign[j] < base:
                break
            assign[j] = 0
            j -= 1
        if j < 0:
            return True


@njit(cache=True)
def _assoc_ok(f, a, b, v):
    n = f.shape[0]
    for z in range(n):
        l = f[v, z]
        t = f[b, z]
        if l >= 0 and t >= 0:
            r = f[a, t]
            if r >= 0 and r != l:
                return False
    for x in range(n):
        t = f[x, a]
        r = f[x, v]
        if t >= 0 and r >= 0:
            l = f[t, b]
            if l >= 0 and l != r:
                return False
    for x in range(n):
        for y in range(n):
            if f[x, y] == a:
                t = f[y, b]
                if t >= 0:
                    r = f[x, t]
                    if r >= 0 and r != v:
                        return False
            if f[x, y] == b:
                t = f[a, x]
                if t >= 0:
                    l = f[t, y]
                    if l >= 0 and l != v:
                        return False
    return True


@njit(cache=True)
def _absorb_ok(F, G, a, b, v):
    """Absorption instances through the new cell F[a, b] = v, G the other table."""
    n = F.shape[0]
    t = G[a, v]
    if t >= 0 and t != a:
        return False
    t = G[v, b]
    if t >= 0 and t != b:
        return False
    for y in range(n):
        if G[a, y] == b and v != a:
            return False
        if G[y, b] == a and v != b:
            return False
    return True


@njit(cache=True)
def _leaf_ok(M, J, codes, starts, lens, con_eq0, con_neq, con_nvars, con_group, n_forbid,
             assign, stack):
    n = M.shape[0]
    ncon = con_eq0.shape[0]
    held = np.ones(max(n_forbid, 1), dtype=np.bool_)
    for c in range(ncon):
        ok = _con_ok(M, J, codes, starts, lens, con_eq0[c], con_neq[c], con_nvars[c], n - 1,
                     assign, stack)
        g = con_group[c]
        if g < 0:
            if not ok:
                return False
        elif not ok:
            held[g] = False
    for g in range(n_forbid):
        if held[g]:
            return False
    return True


@njit(cache=True)
def _search_kernel(M, J, cell_op, cell_x, cell_y, cell_lo, cell_hi, cell_level, level_last,
                   cls, sym, ctop, cbase,
                   codes, starts, lens, con_eq0, con_neq, con_nvars, con_group, n_forbid,
                   cur, mt, state, max_nodes, sol_M, sol_J):
    """Resumable depth-first search.  state = [depth, nodes, done]; returns solutions found."""
    ncells = cell_op.shape[0]
    ncls = cbase.shape[0]
    assign = np.zeros(8, dtype=np.int64)
    stack = np.zeros(codes.shape[0] + 2, dtype=np.int64)
    max_sol = sol_M.shape[0]
    nsol = 0
    nodes = 0
    if ncells == 0:
        if state[2] == 0:
            state[2] = 1
            if _leaf_ok(M, J, codes, starts, lens, con_eq0, con_neq, con_nvars, con_group,
                        n_forbid, assign, stack):
                sol_M[0] = M
                sol_J[0] = J
                return 1
        return 0
    d = state[0]
    while True:
        if d < 0:
            state[2] = 1
            break
        if nodes >= max_nodes or nsol >= max_sol:
            break
        x = cell_x[d]
        y = cell_y[d]
        if cur[d] >= 0:
            v = cur[d] + 1
        else:
            v = cell_lo[d]
        hi = cell_hi[d]
        c = cls[cell_lo[d]]
        if sym[c]:
            lim = mt[d, c] + 2
            if lim < hi:
                hi = lim
        found = False
        while v < hi:
            nodes += 1
            if cell_op[d] == 0:
                M[x, y] = v
                good = _absorb_ok(M, J, x, y, v) and _assoc_ok(M, x, y, v)
            else:
                J[x, y] = v
                good = _absorb_ok(J, M, x, y, v) and _assoc_ok(J, x, y, v)
            if good and level_last[d]:
                for ci in range(con_eq0.shape[0]):
                    if con_group[ci] < 0:
                        if not _con_ok(M, J, codes, starts, lens, con_eq0[ci], con_neq[ci],
                                       con_nvars[ci], cell_level[d], assign, stack):
                            good = False
                            break
            if good:
                found = True
                break
            v += 1
        if not found:
            if cell_op[d] == 0:
                M[x, y] = -1
            else:
                J[x, y] = -1
            cur[d] = -1
            d -= 1
            continue
        cur[d] = v
        if d + 1 == ncells:
            if _leaf_ok(M, J, codes, starts, lens, con_eq0, con_neq, con_nvars, con_group,
                        n_forbid, assign, stack):
                sol_M[nsol] = M
                sol_J[nsol] = J
                nsol += 1
            continue
        for k in range(ncls):
            mt[d + 1, k] = mt[d, k]
        if sym[c] and v > mt[d + 1, c]:
            mt[d + 1, c] = v
        lev = cell_level[d + 1]
        if lev > cell_level[d]:
            for k in range(ncls):
                if cbase[k] <= lev:
                    top = ctop[k] if ctop[k] < lev else lev
                    if top > mt[d + 1, k]:
                        mt[d + 1, k] = top
        d += 1
        cur[d] = -1
    state[0] = d
    state[1] += nodes
    return nsol


class SkeletonSearch:
    """Resumable search of one skeleton under compiled constraints."""

    def __init__(self, skel: Skeleton, comp: _Compiled):
        self.skel = skel
        self.comp = comp
        lat, sizes, shapes = skel.lattice, skel.sizes, skel.shapes
        k = len(sizes)
        n = skel.order
        base = np.cumsum((0,) + sizes[:-1]).astype(np.int64)
        cls = np.repeat(np.arange(k), sizes).astype(np.int64)
        M = -np.ones((n, n), dtype=np.int64)
        J = -np.ones((n, n), dtype=np.int64)
        for c in range(k):
            r, q = shapes[c]
            for a in range(sizes[c]):
                for b in range(sizes[c]):
                    i, jj = divmod(a, q)
                    kk, ll = divmod(b, q)
                    M[base[c] + a, base[c] + b] = base[c] + i * q + ll
                    J[base[c] + a, base[c] + b] = base[c] + kk * q + jj
        left = all(s[1] == 1 for s in shapes)
        right = all(s[0] == 1 for s in shapes)
        lo = {}
        for x in range(n):
            for y in range(n):
                cx, cy = cls[x], cls[y]
                if cx == cy:
                    continue
                for op, tab, tc in ((0, M, lat.meet[cx, cy]), (1, J, lat.join[cx, cy])):
                    if sizes[tc] == 1:
                        tab[x, y] = base[tc]
                    else:
                        lo[(op, x, y)] = (base[tc], base[tc] + sizes[tc])
                # handed classes force the two "bottom op top" products
                if lat.leq[cx, cy]:  # x below y
                    if left:
                        M[x, y] = x
                        J[x, y] = y
                    if right:
                        M[y, x] = x
                        J[y, x] = y
        cells = [(op, x, y) for (op, x, y) in lo
                 if (M if op == 0 else J)[x, y] < 0]
        cells.sort(key=lambda c: (max(c[1], c[2]), min(c[1], c[2]), c[1] < c[2], c[0]))
        i64 = lambda xs: np.asarray(xs, dtype=np.int64).reshape(-1)
        self.M, self.J = M, J
        self.cell_op = i64([c[0] for c in cells])
        self.cell_x = i64([c[1] for c in cells])
        self.cell_y = i64([c[2] for c in cells])
        self.cell_lo = i64([lo[c][0] for c in cells])
        self.cell_hi = i64([lo[c][1] for c in cells])
        self.cell_level = i64([max(c[1], c[2]) for c in cells])
        nc = len(cells)
        self.level_last = np.array([i == nc - 1 or self.cell_level[i + 1] != self.cell_level[i]
                                    for i in range(nc)], dtype=np.bool_)
        self.cls = cls
        self.sym = np.array([sizes[c] > 1 and (shapes[c][0] == 1 or shapes[c][1] == 1)
                             for c in range(k)], dtype=np.bool_)
        self.cbase = base
        self.ctop = base + np.asarray(sizes, dtype=np.int64) - 1
        self.cur = -np.ones(max(nc, 1), dtype=np.int64)
        self.mt = np.zeros((max(nc, 1), k), dtype=np.int64)
        self.mt[0] = base - 1
        if nc:
            lev = self.cell_level[0]
            for c in range(k):
                if base[c] <= lev:
                    self.mt[0, c] = max(self.mt[0, c], min(self.ctop[c], lev))
        self.state = np.zeros(3, dtype=np.int64)
        self.ncells = nc

    @property
    def done(self) -> bool:
        return bool(self.state[2])

    @property
    def nodes(self) -> int:
        return int(self.state[1])

    def step(self, max_nodes: int = CHUNK_NODES):
        """Advance the search; returns a list of (meet, join) table pairs."""
        n = self.skel.order
        sol_M = np.zeros((SOLUTION_BUFFER, n, n), dtype=np.int64)
        sol_J = np.zeros((SOLUTION_BUFFER, n, n), dtype=np.int64)
        c = self.comp
        k = _search_kernel(self.M, self.J, self.cell_op, self.cell_x, self.cell_y, self.cell_lo,
                           self.cell_hi, self.cell_level, self.level_last, self.cls, self.sym,
                           self.ctop, self.cbase, c.codes, c.starts, c.lens, c.con_eq0,
                           c.con_neq, c.con_nvars, c.con_group, c.n_forbid, self.cur, self.mt,
                           self.state, max_nodes, sol_M, sol_J)
        return [(sol_M[i].copy(), sol_J[i].copy()) for i in range(k)]


# -- driver ----------------------------------------------------------------------------------------------

@dataclass
class SearchResult:
    constraint: SearchConstraint
    status: str  # exhausted | truncated
    hits: list[FiniteSkewLattice]
    scope: dict = field(default_factory=dict)
    stopped_by: str | None = None

    @property
    def exhausted(self) -> bool:
        return self.status == "exhausted"

    def manifest(self, files: list[str] | None = None) -> dict:
        return {"constraints": self.constraint.to_json(), "scope": self.scope,
                "status": self.status, "stopped_by": self.stopped_by,
                "hits": files if files is not None else [canonical_form(h).hex() for h in self.hits]}


def _accepts(alg: FiniteSkewLattice, constraint: SearchConstraint) -> bool:
    """Independent re-check of a candidate with the property checkers."""
    if not validate(alg.meet, alg.join).ok:
        raise AssertionError("search produced a table pair that is not a skew lattice")
    hand = handedness(alg)
    if constraint.handedness and hand not in (constraint.handedness, "both"):
        return False
    if constraint.chain_shape is not None:
        lat = lattice_image(alg)
        sizes = sorted(len(c) for c in relation_D(alg).classes)
        if not (lat.order == len(constraint.chain_shape)
                and sizes == sorted(constraint.chain_shape)):
            return False

    def sat(c):
        if isinstance(c, PropertyId):
            return check(alg, c).verdict
        if isinstance(c, Identity):
            return bool(holds(alg, c))
        return bool(check_quasi_identity(alg, c))

    return all(sat(c) for c in constraint.require) and not any(sat(c) for c in constraint.forbid)


def _search_skeletons(skels, constraint, deadline, limit, known=None):
    """Run skeletons in order; returns (hits, complete, stopped_by, nodes)."""
    comp = _compile(constraint)
    seen = set() if known is None else known
    hits = []
    nodes = 0
    for skel in skels:
        s = SkeletonSearch(skel, comp)
        while not s.done:
            if time.time() > deadline:
                return hits, False, "timeout", nodes + s.nodes
            for meet, join in s.step():
                key = canonical_form(FiniteSkewLattice(meet, join))
                if key in seen:
                    continue
                seen.add(key)
                alg = key.algebra()
                if _accepts(alg, constraint):
                    hits.append(alg)
                    if limit is not None and len(hits) >= limit:
                        return hits, False, "limit", nodes + s.nodes
        nodes += s.nodes
    return hits, True, None, nodes


def _worker(args):
    skels, constraint, deadline, limit = args
    hits, complete, stopped, nodes = _search_skeletons(skels, constraint, deadline, limit)
    return [(h.meet, h.join) for h in hits], complete, stopped, nodes


def enumerate_models(constraint: SearchConstraint, limit: int | None = None,
                     timeout: float | None = DEFAULT_TIMEOUT, workers: int = 1) -> SearchResult:
    """All algebras meeting the constraint up to isomorphism (or the first ``limit``)."""
    start = time.time()
    deadline = start + (timeout if timeout is not None else float("inf"))
    skels = skeletons(constraint)
    if workers <= 1 or len(skels) < 2:
        hits, complete, stopped, nodes = _search_skeletons(skels, constraint, deadline, limit)
    else:
        chunks = [skels[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_worker, [(c, constraint, deadline, limit) for c in chunks]))
        found: dict[CanonicalForm, FiniteSkewLattice] = {}
        complete, stopped, nodes = True, None, 0
        for pairs, ok, why, cnt in parts:
            nodes += cnt
            complete &= ok
            stopped = stopped or why
            for m, j in pairs:
                alg = FiniteSkewLattice(m, j)
                found.setdefault(canonical_form(alg), alg)
        hits = [found[k] for k in sorted(found)]
        if limit is not None and len(hits) >= limit:
            hits = hits[:limit]
            if complete:
                complete, stopped = False, "limit"
    for i, h in builtins.enumerate(hits):
        object.__setattr__(h, "name", f"hit_{constraint.order}_{i}")
    scope = {
        "order": constraint.order,
        "skeletons": len(skels),
        "handedness": constraint.handedness or "any",
        "chain_shape": list(constraint.chain_shape) if constraint.chain_shape else None,
        "lattice_image": {True: "distributive only", False: "non-distributive only",
                          None: "all lattices"}[_qd_filter(constraint)],
        "symmetry_breaking": "least-number heuristic inside one-sided classes; "
                             "post-hoc canonical-form dedupe",
        "nodes": nodes,
        "seconds": round(time.time() - start, 3),
    }
    return SearchResult(constraint, "exhausted" if complete else "truncated", hits, scope,
                        stopped)


def iter_models(constraint: SearchConstraint, timeout: float | None = DEFAULT_TIMEOUT):
    """Stream hits as they are found (single worker)."""
    deadline = time.time() + (timeout if timeout is not None else float("inf"))
    comp = _compile(constraint)
    seen = set()
    for skel in skeletons(constraint):
        s = SkeletonSearch(skel, comp)
        while not s.done:
            if time.time() > deadline:
                return
            for meet, join in s.step():
                key = canonical_form(FiniteSkewLattice(meet, join))
                if key not in seen:
                    seen.add(key)
                    alg = key.algebra()
                    if _accepts(alg, constraint):
                        yield alg


@dataclass
class CounterexampleResult:
    hit: FiniteSkewLattice | None
    per_order: list[tuple[int, str]]

    @property
    def exhausted(self) -> bool:
        return self.hit is None and all(s == "exhausted" for _, s in self.per_order)


def find_counterexample(require, forbid, order_range, *, handedness: str | None = None,
                        chain_shapes=None, timeout: float | None = DEFAULT_TIMEOUT,
                        workers: int = 1) -> CounterexampleResult:
    """First hit over increasing orders, or a per-order exhaustion certificate.

    With ``chain_shapes`` the orders are those of the shapes and ``order_range`` is ignored.
    """
    cases = ([SearchConstraint(sum(s), require, forbid, handedness, tuple(s)) for s in chain_shapes]
             if chain_shapes is not None else
             [SearchConstraint(n, require, forbid, handedness) for n in order_range])
    log = []
    for c in cases:
        res = enumerate_models(c, limit=1, timeout=timeout, workers=workers)
        if res.hits:
            log.append((c.order, "hit"))
            return CounterexampleResult(res.hits[0], log)
        log.append((c.order, res.status))
    return CounterexampleResult(None, log)


def write_results(result: SearchResult, outdir) -> Path:
    """Hits as algebra files plus manifest.json; returns the manifest path."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for h in result.hits:
        fname = f"{h.name}.skt"
        (out / fname).write_text(format_algebra(h), encoding="utf-8")
        files.append(fname)
    path = out / "manifest.json"
    path.write_text(json.dumps(result.manifest(files), indent=2), encoding="utf-8")
    return path


# -- brute-force oracle --------------------------------------------------------------------------------

def _idempotent_tables(n: int):
    """All n×n tables with t[x,x]=x, yielded in chunks of shape (T, n, n)."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    total = n ** len(off)
    chunk = 1 << 18
    for s in range(0, total, chunk):
        idx = np.arange(s, min(total, s + chunk), dtype=np.int64)
        t = np.empty((idx.shape[0], n, n), dtype=np.int64)
        for i in range(n):
            t[:, i, i] = i
        rem = idx
        for i, j in reversed(off):
            t[:, i, j] = rem % n
            rem = rem // n
        yield t


def bands(n: int) -> np.ndarray:
    """Every associative idempotent table on n labelled elements."""
    keep = []
    for t in _idempotent_tables(n):
        for x, y, z in itertools.product(range(n), repeat=3):
            if not t.shape[0]:
                break
            r = np.arange(t.shape[0])
            xy = t[:, x, y]
            lhs = t[r, xy, z]
            rhs = t[r, x, t[:, y, z]]
            t = t[lhs == rhs]
        keep.append(t)
    return np.concatenate(keep) if keep else np.zeros((0, n, n), dtype=np.int64)


def oracle_enumerate(n: int) -> list[FiniteSkewLattice]:
    """Skew lattices of order n up to isomorphism by filtering all table pairs.

    Every pair of bands is tested for absorption, survivors are fully validated
    and reduced to canonical forms.  Feasible for n ≤ 4.
    """
    bs = bands(n)
    found: dict[CanonicalForm, FiniteSkewLattice] = {}
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    for m in bs:
        # x∧(x∨y)=x, (y∨x)∧x=x, x∨(x∧y)=x, (y∧x)∨x=x for every candidate join at once
        j = bs
        ok = (m[x, j[:, x, y]] == x).all(axis=(1, 2))
        ok &= (m[j[:, y, x], x] == x).all(axis=(1, 2))
        ok &= (j[:, x, m[x, y]] == x).all(axis=(1, 2))
        ok &= (j[:, m[y, x], x] == x).all(axis=(1, 2))
        for jj in bs[ok]:
            if validate(m, jj).ok:
                alg = FiniteSkewLattice(m, jj)
                found.setdefault(canonical_form(alg), alg)
    return [found[k] for k in sorted(found)]


enumerate = enumerate_models
