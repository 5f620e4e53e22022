"""Plain-Python reference implementations used as test oracles.

Nothing here touches numpy kernels or the package's own checkers: tables are
read element by element and every quantifier is an explicit loop.
"""
from __future__ import annotations

import itertools

from skewlat.terms import Meet, Var


def tables(alg):
    return alg.meet.tolist(), alg.join.tolist()


def py_eval(term, m, j, assign):
    if isinstance(term, Var):
        return assign[term.slot]
    a = py_eval(term.left, m, j, assign)
    b = py_eval(term.right, m, j, assign)
    return m[a][b] if isinstance(term, Meet) else j[a][b]


def identity_failures(alg, ident, nvars=None):
    """Every failing assignment, in row-major order."""
    m, j = tables(alg)
    nvars = nvars or ident.arity
    out = []
    for a in itertools.product(range(alg.order), repeat=nvars):
        lhs, rhs = py_eval(ident.lhs, m, j, a), py_eval(ident.rhs, m, j, a)
        if lhs != rhs:
            out.append((a, lhs, rhs))
    return out


def quasi_failures(alg, q):
    m, j = tables(alg)
    out = []
    for a in itertools.product(range(alg.order), repeat=q.variable_count):
        if all(py_eval(s, m, j, a) == py_eval(t, m, j, a) for s, t in q.premises):
            s, t = q.conclusion
            if py_eval(s, m, j, a) != py_eval(t, m, j, a):
                out.append(a)
    return out


def is_skew_lattice(m, j) -> bool:
    n = len(m)
    r = range(n)
    for x in r:
        if m[x][x] != x or j[x][x] != x:
            return False
    for x, y, z in itertools.product(r, repeat=3):
        if m[m[x][y]][z] != m[x][m[y][z]] or j[j[x][y]][z] != j[x][j[y][z]]:
            return False
    for x, y in itertools.product(r, repeat=2):
        if not (m[x][j[x][y]] == x == m[j[y][x]][x] and j[x][m[x][y]] == x == j[m[y][x]][x]):
            return False
    return True


def d_classes(alg):
    m, _ = tables(alg)
    n = alg.order
    seen, out = set(), []
    for x in range(n):
        if x in seen:
            continue
        cls = [y for y in range(n) if m[m[x][y]][x] == x and m[m[y][x]][y] == y]
        seen.update(cls)
        out.append(tuple(cls))
    return sorted(out)


def r_related(m, x, y):
    return m[x][y] == y and m[y][x] == x


def l_related(m, x, y):
    return m[x][y] == x and m[y][x] == y


def natural_ge(alg):
    m, _ = tables(alg)
    n = alg.order
    return {(x, y) for x in range(n) for y in range(n) if m[x][y] == y and m[y][x] == y}


def closed(alg, elems) -> bool:
    m, j = tables(alg)
    s = set(elems)
    return all(m[a][b] in s and j[a][b] in s for a in s for b in s)


def subalgebras(alg):
    n = alg.order
    out = []
    for mask in range(1, 1 << n):
        elems = [i for i in range(n) if mask >> i & 1]
        if closed(alg, elems):
            out.append(tuple(elems))
    return sorted(out)


def closure(alg, seed):
    m, j = tables(alg)
    s = set(seed)
    while True:
        new = {m[a][b] for a in s for b in s} | {j[a][b] for a in s for b in s}
        if new <= s:
            return s
        s |= new


def lattice_count(k: int) -> int:
    """Unlabelled lattices on k elements by brute force over partial orders."""
    if k <= 2:
        return 1
    pairs = [(a, b) for a in range(k) for b in range(a + 1, k)]
    found = set()
    perms = list(itertools.permutations(range(k)))
    for mask in range(1 << len(pairs)):
        le = {(a, a) for a in range(k)}
        le |= {p for i, p in enumerate(pairs) if mask >> i & 1}
        # a linear extension with 0 bottom and k-1 top; transitive and bounded
        if any((a, c) not in le for (a, b) in le for (b2, c) in le if b == b2):
            continue
        if not all((0, x) in le and (x, k - 1) in le for x in range(k)):
            continue
        ok = True
        for a, b in itertools.combinations(range(k), 2):
            ups = [c for c in range(k) if (a, c) in le and (b, c) in le]
            least = [c for c in ups if all((c, d) in le for d in ups)]
            downs = [c for c in range(k) if (c, a) in le and (c, b) in le]
            great = [c for c in downs if all((d, c) in le for d in downs)]
            if len(least) != 1 or len(great) != 1:
                ok = False
                break
        if not ok:
            continue
        key = min(tuple(sorted((p[a], p[b]) for a, b in le)) for p in perms)
        found.add(key)
    return len(found)


def isomorphic(a, b) -> bool:
    """Brute force over all bijections (tiny orders only)."""
    if a.order != b.order:
        return False
    ma, ja = tables(a)
    mb, jb = tables(b)
    n = a.order
    for p in itertools.permutations(range(n)):
        if all(p[ma[x][y]] == mb[p[x]][p[y]] and p[ja[x][y]] == jb[p[x]][p[y]]
               for x in range(n) for y in range(n)):
            return True
    return False


def brute_canonical(a) -> bytes:
    """Lexicographically least (meet, join) table pair over every relabeling."""
    import numpy as np
    n = a.order
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    inv = np.argsort(perms, axis=1)
    best = None
    for p, q in zip(perms, inv):
        # relabel x -> p[x]: new[u, v] = p[old[q[u], q[v]]]
        m = p[a.meet[np.ix_(q, q)]]
        j = p[a.join[np.ix_(q, q)]]
        key = np.concatenate([m.ravel(), j.ravel()]).astype(np.int8).tobytes()
        if best is None or key < best:
            best = key
    return best
