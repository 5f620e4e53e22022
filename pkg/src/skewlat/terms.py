"""Terms over the {meet, join} signature, identities and quasi-identities.

Terms are small immutable trees.  The kernels never walk trees; they run a
postfix program where a non-negative code pushes a variable slot and the
negative codes ``MEET``/``JOIN`` pop two operands.

Text syntax: ``&`` or ``∧`` for meet, ``|`` or ``∨`` for join; meet binds
tighter than join.  ``x & (y | z) & x = (x & y & x) | (x & z & x)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

MEET = -1
JOIN = -2


@dataclass(frozen=True)
class Var:
    slot: int

    def __str__(self):
        return _default_name(self.slot)


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"({self.left} ∧ {self.right})"


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"({self.left} ∨ {self.right})"


Term = Union[Var, Meet, Join]

_DEFAULT_NAMES = "xyzwuvabcdefghijklmnopqrst"


def _default_name(slot):
    return _DEFAULT_NAMES[slot] if slot < len(_DEFAULT_NAMES) else f"v{slot}"


def meet(*terms: Term) -> Term:
    """Left-nested meet of two or more terms."""
    out = terms[0]
    for t in terms[1:]:
        out = Meet(out, t)
    return out


def join(*terms: Term) -> Term:
    out = terms[0]
    for t in terms[1:]:
        out = Join(out, t)
    return out


def slots(t: Term) -> set[int]:
    if isinstance(t, Var):
        return {t.slot}
    return slots(t.left) | slots(t.right)


def dual(t: Term) -> Term:
    """Swap meet and join throughout."""
    if isinstance(t, Var):
        return t
    if isinstance(t, Meet):
        return Join(dual(t.left), dual(t.right))
    return Meet(dual(t.left), dual(t.right))


def mirror(t: Term) -> Term:
    """Reverse operand order throughout (the left/right mirror image)."""
    if isinstance(t, Var):
        return t
    return type(t)(mirror(t.right), mirror(t.left))


def substitute(t: Term, mapping: Sequence[Term]) -> Term:
    if isinstance(t, Var):
        return mapping[t.slot]
    return type(t)(substitute(t.left, mapping), substitute(t.right, mapping))


def compile_term(t: Term) -> np.ndarray:
    out: list[int] = []

    def walk(node):
        if isinstance(node, Var):
            out.append(node.slot)
        else:
            walk(node.left)
            walk(node.right)
            out.append(MEET if isinstance(node, Meet) else JOIN)

    walk(t)
    return np.asarray(out, dtype=np.int64)


def render(t: Term, names: Sequence[str] | None = None, top: bool = True) -> str:
    if isinstance(t, Var):
        return names[t.slot] if names else _default_name(t.slot)
    sym = " ∧ " if isinstance(t, Meet) else " ∨ "
    parts = []
    for side in _flatten(t, type(t)):
        parts.append(render(side, names, top=False))
    s = sym.join(parts)
    return s if top else f"({s})"


def _flatten(t, kind):
    if isinstance(t, kind):
        return _flatten(t.left, kind) + _flatten(t.right, kind)
    return [t]


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9']*)|(?P<op>[&|∧∨()^]))")


class TermSyntaxError(ValueError):
    pass


def _tokenize(text):
    pos, toks = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise TermSyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        toks.append(m.group("name") or m.group("op"))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return toks


def parse_term(text: str, variables: list[str] | None = None) -> tuple[Term, list[str]]:
    """Parse ``text``; new variable names are appended to ``variables``."""
    variables = [] if variables is None else variables
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take():
        nonlocal pos
        pos += 1
        return toks[pos - 1]

    def atom():
        tok = take() if peek() is not None else None
        if tok is None:
            raise TermSyntaxError("unexpected end of term")
        if tok == "(":
            t = joins()
            if peek() != ")":
                raise TermSyntaxError("missing ')'")
            take()
            return t
        if tok in "&|∧∨()^":
            raise TermSyntaxError(f"unexpected {tok!r}")
        if tok not in variables:
            variables.append(tok)
        return Var(variables.index(tok))

    def meets():
        t = atom()
        while peek() in ("&", "∧", "^"):
            take()
            t = Meet(t, atom())
        return t

    def joins():
        t = meets()
        while peek() in ("|", "∨"):
            take()
            t = Join(t, meets())
        return t

    t = joins()
    if pos != len(toks):
        raise TermSyntaxError(f"trailing input near {toks[pos]!r}")
    return t, variables


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term
    names: tuple[str, ...] = ()
    label: str = ""

    @property
    def arity(self) -> int:
        used = slots(self.lhs) | slots(self.rhs)
        return max(used) + 1 if used else 0

    def var_names(self) -> tuple[str, ...]:
        if self.names:
            return self.names
        return tuple(_default_name(i) for i in range(self.arity))

    def __str__(self):
        names = self.var_names()
        return f"{render(self.lhs, names)} = {render(self.rhs, names)}"


@dataclass(frozen=True)
class QuasiIdentity:
    premises: tuple[tuple[Term, Term], ...]
    conclusion: tuple[Term, Term]
    variable_count: int
    names: tuple[str, ...] = ()
    label: str = ""

    def __post_init__(self):
        used = set()
        for a, b in (*self.premises, self.conclusion):
            used |= slots(a) | slots(b)
        if used and max(used) >= self.variable_count:
            raise ValueError("slot outside variable_count")

    def var_names(self) -> tuple[str, ...]:
        if self.names:
            return self.names
        return tuple(_default_name(i) for i in range(self.variable_count))

    def __str__(self):
        n = self.var_names()
        prem = " and ".join(f"{render(a, n)} = {render(b, n)}" for a, b in self.premises)
        a, b = self.conclusion
        return f"{prem} ⇒ {render(a, n)} = {render(b, n)}"


def parse_identity(text: str, label: str = "") -> Identity:
    """Parse ``"lhs = rhs"``; variables are numbered by first appearance."""
    if text.count("=") != 1:
        raise TermSyntaxError("an identity needs exactly one '='")
    left, right = text.split("=")
    names: list[str] = []
    lhs, names = parse_term(left, names)
    rhs, names = parse_term(right, names)
    return Identity(lhs, rhs, tuple(names), label)


def parse_quasi(text: str, label: str = "") -> QuasiIdentity:
    """Parse ``"a = b, c = d => e = f"``."""
    if "=>" not in text:
        raise TermSyntaxError("a quasi-identity needs '=>'")
    prem_text, concl_text = text.split("=>")
    names: list[str] = []
    premises = []
    for part in prem_text.split(","):
        if not part.strip():
            continue
        a, b = part.split("=")
        ta, names = parse_term(a, names)
        tb, names = parse_term(b, names)
        premises.append((ta, tb))
    a, b = concl_text.split("=")
    ca, names = parse_term(a, names)
    cb, names = parse_term(b, names)
    return QuasiIdentity(tuple(premises), (ca, cb), len(names), tuple(names), label)


def identity_dual(ident: Identity) -> Identity:
    return Identity(dual(ident.lhs), dual(ident.rhs), ident.names, ident.label + "_dual")
