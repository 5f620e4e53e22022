"""Finite skew lattices as pairs of operation tables.

Elements are the dense indices ``0..n-1``; row ``i`` column ``j`` of ``meet``
holds ``i ∧ j``.  Optional element labels only affect printing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .terms import Identity, Meet, QuasiIdentity, Term, Var, compile_term, slots

DEFAULT_BUDGET = 10 ** 9


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class BudgetExceeded(RuntimeError):
    pass


class InvalidAlgebraError(ValueError):
    pass


def _freeze(table):
    arr = np.array(table, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteSkewLattice:
    meet: np.ndarray
    join: np.ndarray
    name: str = ""
    labels: tuple[str, ...] | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "meet", _freeze(self.meet))
        object.__setattr__(self, "join", _freeze(self.join))
        n = self.meet.shape[0]
        for t, what in ((self.meet, "meet"), (self.join, "join")):
            if t.ndim != 2 or t.shape != (n, n):
                raise ValueError(f"{what} table must be square and match the other table")
            if n and (t.min() < 0 or t.max() >= n):
                raise ValueError(f"{what} table has an entry outside 0..{n - 1}")
        if n == 0:
            raise ValueError("order must be positive")
        if self.labels is not None:
            if len(self.labels) != n:
                raise ValueError("label count differs from order")
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def order(self) -> int:
        return self.meet.shape[0]

    def __len__(self):
        return self.order

    def __eq__(self, other):
        if not isinstance(other, FiniteSkewLattice):
            return NotImplemented
        return (np.array_equal(self.meet, other.meet)
                and np.array_equal(self.join, other.join))

    def __hash__(self):
        return hash((self.meet.tobytes(), self.join.tobytes()))

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def index(self, label) -> int:
        """Element index for a label (or an int passed through)."""
        if isinstance(label, (int, np.integer)):
            return int(label)
        if self.labels and label in self.labels:
            return self.labels.index(label)
        return int(label)

    def m(self, *xs) -> int:
        """Left-nested meet of elements (indices or labels)."""
        out = self.index(xs[0])
        for x in xs[1:]:
            out = int(self.meet[out, self.index(x)])
        return out

    def j(self, *xs) -> int:
        out = self.index(xs[0])
        for x in xs[1:]:
            out = int(self.join[out, self.index(x)])
        return out

    def relabel(self, perm: Sequence[int], name: str | None = None) -> "FiniteSkewLattice":
        """Image under the bijection ``x -> perm[x]``."""
        perm = np.asarray(perm, dtype=np.int64)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        meet = perm[self.meet[np.ix_(inv, inv)]]
        join = perm[self.join[np.ix_(inv, inv)]]
        labels = tuple(self.labels[i] for i in inv) if self.labels else None
        return FiniteSkewLattice(meet, join, self.name if name is None else name, labels)

    def restrict(self, elements: Sequence[int], name: str = "") -> "FiniteSkewLattice":
        """Subalgebra on ``elements`` (must be closed), renumbered in the given order."""
        elements = [int(e) for e in elements]
        pos = {e: i for i, e in enumerate(elements)}
        try:
            meet = [[pos[int(self.meet[a, b])] for b in elements] for a in elements]
            join = [[pos[int(self.join[a, b])] for b in elements] for a in elements]
        except KeyError as exc:
            raise ValueError(f"subset not closed: produces {exc.args[0]}") from None
        labels = tuple(self.label(e) for e in elements) if self.labels else None
        return FiniteSkewLattice(meet, join, name, labels)


# -- file format ----------------------------------------------------------------

def parse_algebra(text: str) -> FiniteSkewLattice:
    """Parse the text format.  The result is not validated."""
    name, labels = "", None
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    body = []
    for lineno, ln in lines:
        if not ln:
            continue
        if ln.startswith("#"):
            meta = ln[1:].strip()
            if meta.startswith("name:"):
                name = meta[5:].strip()
            elif meta.startswith("labels:"):
                labels = tuple(meta[7:].split())
            continue
        body.append((lineno, ln))
    if not body:
        raise ParseError("empty algebra file", 1)
    lineno, ln = body[0]
    parts = ln.split()
    if len(parts) != 2 or parts[0] != "order":
        raise ParseError("expected header 'order N'", lineno)
    try:
        n = int(parts[1])
    except ValueError:
        raise ParseError(f"order is not an integer: {parts[1]!r}", lineno) from None
    if n <= 0:
        raise ParseError("order must be positive", lineno)
    pos = 1
    tables = {}
    for section in ("meet", "join"):
        if pos >= len(body):
            raise ParseError(f"missing '{section}' section", body[-1][0])
        lineno, ln = body[pos]
        if ln != section:
            raise ParseError(f"expected '{section}', found {ln!r}", lineno)
        pos += 1
        rows = []
        for r in range(n):
            if pos >= len(body) or body[pos][1] in ("meet", "join"):
                at = body[pos][0] if pos < len(body) else body[-1][0]
                raise ParseError(f"{section} table has {r} rows, expected {n}", at)
            lineno, ln = body[pos]
            try:
                row = [int(v) for v in ln.split()]
            except ValueError:
                raise ParseError(f"non-integer entry in {section} row", lineno) from None
            if len(row) != n:
                raise ParseError(f"{section} row has {len(row)} entries, expected {n}", lineno)
            for v in row:
                if not 0 <= v < n:
                    raise ParseError(f"entry {v} out of range 0..{n - 1}", lineno)
            rows.append(row)
            pos += 1
        tables[section] = rows
    if pos != len(body):
        raise ParseError(f"unexpected content {body[pos][1]!r}", body[pos][0])
    if labels is not None and len(labels) != n:
        raise ParseError(f"{len(labels)} labels for order {n}", None)
    return FiniteSkewLattice(tables["meet"], tables["join"], name, labels)


def format_algebra(alg: FiniteSkewLattice) -> str:
    out = []
    if alg.name:
        out.append(f"# name: {alg.name}")
    if alg.labels:
        out.append("# labels: " + " ".join(alg.labels))
    out.append(f"order {alg.order}")
    width = len(str(alg.order - 1))
    for section, table in (("meet", alg.meet), ("join", alg.join)):
        out.append(section)
        for row in table:
            out.append(" ".join(str(int(v)).rjust(width) for v in row))
    return "\n".join(out) + "\n"


def load_algebra(path) -> FiniteSkewLattice:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read())


# -- term evaluation and identity checking ---------------------------------------

def evaluate_term(alg: FiniteSkewLattice, t: Term, assignment: Sequence[int]) -> int:
    need = max(slots(t)) + 1
    if len(assignment) < need:
        raise ValueError(f"assignment binds {len(assignment)} slots, term needs {need}")
    return _eval(alg, t, assignment)


def _eval(alg, t, assignment):
    if isinstance(t, Var):
        return int(assignment[t.slot])
    a = _eval(alg, t.left, assignment)
    b = _eval(alg, t.right, assignment)
    return int(alg.meet[a, b] if isinstance(t, Meet) else alg.join[a, b])


@dataclass(frozen=True)
class CheckResult:
    """Outcome of an exhaustive check.  Truthy iff the property holds."""
    holds: bool
    witness: tuple[int, ...] | None = None
    lhs: int | None = None
    rhs: int | None = None
    names: tuple[str, ...] = ()

    def __bool__(self):
        return self.holds

    def describe(self, alg: FiniteSkewLattice | None = None) -> str:
        if self.holds:
            return "holds"
        lab = alg.label if alg is not None else str
        parts = [f"{n}={lab(v)}" for n, v in zip(self.names, self.witness)]
        if self.lhs is not None:
            parts += [f"lhs={lab(self.lhs)}", f"rhs={lab(self.rhs)}"]
        return " ".join(parts)


def _check_budget(n, nvars, budget):
    budget = DEFAULT_BUDGET if budget is None else budget
    if n ** nvars > budget:
        raise BudgetExceeded(f"{n}^{nvars} assignments exceed budget {budget}")


def check_identity(alg: FiniteSkewLattice, lhs: Term, rhs: Term, vars: int | None = None,
                   *, names: Sequence[str] = (), budget: int | None = None) -> CheckResult:
    """Exhaustively check ``lhs = rhs``; the witness is the lexicographically first failure."""
    if vars is None:
        used = slots(lhs) | slots(rhs)
        vars = max(used) + 1
    _check_budget(alg.order, vars, budget)
    progs = [compile_term(lhs), compile_term(rhs)]
    idx = kernels.quasi_first_failure(alg.meet, alg.join, progs, vars)
    names = tuple(names) or tuple("xyzwuvabc"[i] if i < 9 else f"v{i}" for i in range(vars))
    if idx < 0:
        return CheckResult(True, names=names)
    w = kernels.unravel(idx, alg.order, vars)
    return CheckResult(False, w, _eval(alg, lhs, w), _eval(alg, rhs, w), names)


def holds(alg: FiniteSkewLattice, ident: Identity, budget: int | None = None) -> CheckResult:
    return check_identity(alg, ident.lhs, ident.rhs, ident.arity,
                          names=ident.var_names(), budget=budget)


def check_quasi_identity(alg: FiniteSkewLattice, q: QuasiIdentity,
                         budget: int | None = None) -> CheckResult:
    _check_budget(alg.order, q.variable_count, budget)
    progs = []
    for a, b in (*q.premises, q.conclusion):
        progs += [compile_term(a), compile_term(b)]
    idx = kernels.quasi_first_failure(alg.meet, alg.join, progs, q.variable_count)
    if idx < 0:
        return CheckResult(True, names=q.var_names())
    w = kernels.unravel(idx, alg.order, q.variable_count)
    a, b = q.conclusion
    return CheckResult(False, w, _eval(alg, a, w), _eval(alg, b, w), q.var_names())


# -- validation --------------------------------------------------------------------

GROUPS = ("idempotent", "associative", "absorption", "dualities", "regularity")


@dataclass
class ValidationReport:
    verdicts: dict[str, bool]
    witnesses: dict[str, tuple]

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    @property
    def first_failure(self):
        for g in GROUPS:
            if not self.verdicts.get(g, True):
                return g, self.witnesses[g]
        return None

    def __bool__(self):
        return self.ok


def _first_true(mask):
    flat = np.asarray(mask).ravel()
    if not flat.any():
        return None
    return np.unravel_index(int(np.argmax(flat)), np.shape(mask))


def d_matrix(meet: np.ndarray) -> np.ndarray:
    """a D b  ⇔  a∧b∧a = a and b∧a∧b = b."""
    n = meet.shape[0]
    r = np.arange(n)
    aba = meet[meet, r[:, None]]  # (a∧b)∧a
    return (aba == r[:, None]) & (aba.T == r[None, :])


def validate(meet, join=None) -> ValidationReport:
    """Exhaustively check the skew-lattice axioms group by group."""
    if join is None and isinstance(meet, FiniteSkewLattice):
        meet, join = meet.meet, meet.join
    meet = np.asarray(meet, dtype=np.int64)
    join = np.asarray(join, dtype=np.int64)
    if meet.shape != join.shape:
        raise ValueError("tables do not share an order")
    n = meet.shape[0]
    r = np.arange(n)
    verdicts, wits = {}, {}

    def record(group, witness, tag):
        verdicts[group] = witness is None
        if witness is not None:
            wits[group] = (tag,) + tuple(int(v) for v in witness)

    bad = None
    for t, tag in ((meet, "meet"), (join, "join")):
        i = _first_true(t[r, r] != r)
        if i is not None:
            bad = (tag, i)
            break
    record("idempotent", None if bad is None else bad[1], bad[0] if bad else "")

    bad = None
    for t, tag in ((meet, "meet"), (join, "join")):
        idx = kernels.assoc_first_failure(t)
        if idx >= 0:
            bad = (tag, kernels.unravel(idx, n, 3))
            break
    record("associative", None if bad is None else bad[1], bad[0] if bad else "")

    x = r[:, None]
    y = r[None, :]
    checks = [
        ("x∧(x∨y)=x", meet[x, join[x, y]] != x),
        ("(y∨x)∧x=x", meet[join[y, x], x] != x),
        ("x∨(x∧y)=x", join[x, meet[x, y]] != x),
        ("(y∧x)∨x=x", join[meet[y, x], x] != x),
    ]
    bad = None
    for tag, mask in checks:
        i = _first_true(mask)
        if i is not None:
            bad = (tag, i)
            break
    record("absorption", None if bad is None else bad[1], bad[0] if bad else "")

    checks = [
        ("x∧y=x⇔x∨y=y", (meet[x, y] == x) != (join[x, y] == y)),
        ("x∧y=y⇔x∨y=x", (meet[x, y] == y) != (join[x, y] == x)),
    ]
    bad = None
    for tag, mask in checks:
        i = _first_true(mask)
        if i is not None:
            bad = (tag, i)
            break
    record("dualities", None if bad is None else bad[1], bad[0] if bad else "")

    dmat = d_matrix(meet)
    bad = None
    for t, tag in ((join, "join"), (meet, "meet")):
        idx = kernels.regular_first_failure(t, dmat)
        if idx >= 0:
            bad = (tag, kernels.unravel(idx, n, 4))
            break
    record("regularity", None if bad is None else bad[1], bad[0] if bad else "")
    return ValidationReport(verdicts, wits)


def validation(alg: FiniteSkewLattice) -> ValidationReport:
    rep = alg._cache.get("validation")
    if rep is None:
        rep = alg._cache["validation"] = validate(alg.meet, alg.join)
    return rep


def ensure_valid(alg: FiniteSkewLattice) -> FiniteSkewLattice:
    rep = validation(alg)
    if not rep.ok:
        group, wit = rep.first_failure
        raise InvalidAlgebraError(f"{alg.name or 'algebra'} fails {group} at {wit}")
    return alg


def is_skew_lattice(meet, join) -> bool:
    return validate(meet, join).ok
