"""Hot loops: exhaustive quantifier scans over operation tables.

Each public function dispatches to a numba kernel or to a vectorised numpy
path depending on ``skewlat._accel.BACKEND``.  Both paths return the same
value: the row-major index of the lexicographically first failing
assignment, or -1.
"""
from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import njit
from .terms import MEET

CHUNK = 1 << 20


def pack_programs(programs):
    """Flatten a list of postfix programs into (codes, starts, lengths)."""
    starts, lens, flat = [], [], []
    for p in programs:
        starts.append(len(flat))
        lens.append(len(p))
        flat.extend(int(c) for c in p)
    return (np.asarray(flat, dtype=np.int64), np.asarray(starts, dtype=np.int64),
            np.asarray(lens, dtype=np.int64))


# -- numba kernels -------------------------------------------------------------

@njit(cache=True)
def _eval_prog(meet, join, codes, start, length, assign, stack):
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
            if c == -1:
                stack[sp - 1] = meet[a, b]
            else:
                stack[sp - 1] = join[a, b]
    return stack[0]


@njit(cache=True)
def _quasi_scan_nb(meet, join, codes, starts, lens, npairs, nvars, lo, hi):
    # pairs 0..npairs-2 are premises, the last pair is the conclusion
    n = meet.shape[0]
    assign = np.zeros(max(nvars, 1), dtype=np.int64)
    stack = np.zeros(codes.shape[0] + 1, dtype=np.int64)
    rem = lo
    for i in range(nvars - 1, -1, -1):
        assign[i] = rem % n
        rem //= n
    for idx in range(lo, hi):
        ok = True
        for p in range(npairs - 1):
            a = _eval_prog(meet, join, codes, starts[2 * p], lens[2 * p], assign, stack)
            b = _eval_prog(meet, join, codes, starts[2 * p + 1], lens[2 * p + 1], assign, stack)
            if a != b:
                ok = False
                break
        if ok:
            p = npairs - 1
            a = _eval_prog(meet, join, codes, starts[2 * p], lens[2 * p], assign, stack)
            b = _eval_prog(meet, join, codes, starts[2 * p + 1], lens[2 * p + 1], assign, stack)
            if a != b:
                return idx
        # odometer, last variable fastest
        j = nvars - 1
        while j >= 0:
            assign[j] += 1
            if assign[j] < n:
                break
            assign[j] = 0
            j -= 1
    return -1


@njit(cache=True)
def _assoc_nb(t):
    n = t.shape[0]
    for x in range(n):
        for y in range(n):
            xy = t[x, y]
            for z in range(n):
                if t[xy, z] != t[x, t[y, z]]:
                    return x * n * n + y * n + z
    return -1


@njit(cache=True)
def _regular_nb(t, dmat):
    # x∘y∘x'∘z∘x == x∘y∘z∘x for x' D-related to x; witness packs (x,y,z,x')
    n = t.shape[0]
    for x in range(n):
        for y in range(n):
            xy = t[x, y]
            for z in range(n):
                rhs = t[t[xy, z], x]
                for x2 in range(n):
                    if dmat[x, x2]:
                        if t[t[t[xy, x2], z], x] != rhs:
                            return ((x * n + y) * n + z) * n + x2
    return -1


# -- numpy paths ---------------------------------------------------------------

def _eval_prog_np(meet, join, codes, digits):
    stack = []
    for c in codes:
        if c >= 0:
            stack.append(digits[c])
        else:
            b = stack.pop()
            a = stack.pop()
            stack.append(meet[a, b] if c == MEET else join[a, b])
    return stack[0]


def _quasi_scan_np(meet, join, programs, nvars, lo, hi):
    n = meet.shape[0]
    for s in range(lo, hi, CHUNK):
        idx = np.arange(s, min(hi, s + CHUNK), dtype=np.int64)
        digits = []
        rem = idx.copy()
        for _ in range(nvars):
            digits.append(rem % n)
            rem //= n
        digits.reverse()
        mask = np.ones(idx.shape[0], dtype=bool)
        pairs = [(programs[2 * p], programs[2 * p + 1]) for p in range(len(programs) // 2)]
        for a, b in pairs[:-1]:
            mask &= _eval_prog_np(meet, join, a, digits) == _eval_prog_np(meet, join, b, digits)
        a, b = pairs[-1]
        bad = mask & (_eval_prog_np(meet, join, a, digits) != _eval_prog_np(meet, join, b, digits))
        if bad.any():
            return int(idx[np.argmax(bad)])
    return -1


def _assoc_np(t):
    n = t.shape[0]
    left = t[t[:, :, None], np.arange(n)[None, None, :]]
    right = t[np.arange(n)[:, None, None], t[None, :, :]]
    bad = (left != right).ravel()
    return int(np.argmax(bad)) if bad.any() else -1


def _regular_np(t, dmat):
    n = t.shape[0]
    ys, zs, x2s = np.indices((n, n, n)).reshape(3, -1)
    for x in range(n):
        xy = t[x, ys]
        lhs = t[t[t[xy, x2s], zs], x]
        rhs = t[t[xy, zs], x]
        bad = dmat[x, x2s] & (lhs != rhs)
        if bad.any():
            return x * n ** 3 + int(np.argmax(bad))
    return -1


# -- dispatch ------------------------------------------------------------------

def quasi_first_failure(meet, join, programs, nvars, lo=0, hi=None):
    """First failing assignment index for premises ⇒ conclusion.

    ``programs`` is a flat list [p0l, p0r, p1l, p1r, ..., concl_l, concl_r].
    """
    n = meet.shape[0]
    if hi is None:
        hi = n ** nvars
    if _accel.USE_NUMBA:
        codes, starts, lens = pack_programs(programs)
        return int(_quasi_scan_nb(meet, join, codes, starts, lens, len(programs) // 2,
                                  nvars, lo, hi))
    return _quasi_scan_np(meet, join, programs, nvars, lo, hi)


def assoc_first_failure(t):
    if _accel.USE_NUMBA:
        return int(_assoc_nb(t))
    return _assoc_np(t)


def regular_first_failure(t, dmat):
    if _accel.USE_NUMBA:
        return int(_regular_nb(t, dmat))
    return _regular_np(t, dmat)


def unravel(index: int, n: int, nvars: int) -> tuple[int, ...]:
    out = []
    for _ in range(nvars):
        out.append(index % n)
        index //= n
    return tuple(reversed(out))
