"""Command-line front end: ``skewlat <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import harness as _harness
from .algebra import (GROUPS, BudgetExceeded, FiniteSkewLattice, InvalidAlgebraError, ParseError,
                      check_quasi_identity, holds, load_algebra, validate)
from .corpus import UnknownAlgebra, builtin, builtin_names, emit
from .cosets import (ChainNotDistributive, ClassesNotComparable, CosetGeometryError, NotAbove,
                     ac_components, chain_conditions, cosets, dot_coset_grid, midpoints, skew_chains)
from .green import (dot_d_classes, dot_natural_order, handedness, lattice_image, natural_orders,
                    relation_D, relation_L, relation_R, verify_first_decomposition,
                    verify_second_decomposition)
from .properties import PropertyId, check, full_report, implications
from .search import SearchConstraint, SearchError, enumerate_models, write_results
from .subalgebras import CapExceeded, all_subalgebras, find_embedding, pattern
from .canonical import canonical_form
from .terms import parse_identity, parse_quasi

OK, FAILS, USAGE, INVALID = 0, 1, 2, 3


@dataclass
class CommandOutcome:
    exit_code: int
    text: str = ""
    payload: dict | list | None = None

    def render(self, as_json: bool) -> str:
        if as_json and self.payload is not None:
            return json.dumps(self.payload, indent=2, ensure_ascii=False)
        return self.text


class _Failure(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Failure(USAGE, f"usage error: {message}")


# -- helpers -------------------------------------------------------------------------------------

def load(spec: str, *, check_valid: bool = True) -> FiniteSkewLattice:
    """A path to an algebra file, or a builtin name."""
    try:
        if os.path.exists(spec):
            alg = load_algebra(spec)
            if not alg.name:
                alg = FiniteSkewLattice(alg.meet, alg.join, Path(spec).stem, alg.labels)
        elif spec.endswith(".skt"):
            alg = builtin(Path(spec).stem)
        else:
            alg = builtin(spec)
    except UnknownAlgebra:
        raise _Failure(INVALID, f"no such file or builtin algebra: {spec}") from None
    except (ParseError, ValueError) as exc:
        raise _Failure(INVALID, f"cannot parse {spec}: {exc}") from None
    if check_valid:
        rep = validate(alg)
        if not rep.ok:
            group, wit = rep.first_failure
            raise _Failure(INVALID, f"{spec} is not a skew lattice: {group} fails at {_wit(alg, wit)}")
    return alg


def _wit(alg, wit):
    tag, *vals = wit
    return f"{tag} " + " ".join(alg.label(v) for v in vals)


def _labels(alg, elems):
    return "{" + ", ".join(alg.label(e) for e in elems) + "}"


def _element(alg, text):
    try:
        x = alg.index(text)
    except ValueError:
        raise _Failure(USAGE, f"unknown element {text!r}") from None
    if not 0 <= x < alg.order:
        raise _Failure(USAGE, f"element {text!r} out of range")
    return x


def _class_of(alg, x):
    for i, c in enumerate(relation_D(alg).classes):
        if x in c:
            return i
    raise AssertionError("element in no D-class")


def _yes(flag):
    return "holds" if flag else "fails"


def _list(text):
    return [t.strip() for t in text.split(",") if t.strip()] if text else []


# -- subcommands ---------------------------------------------------------------------------------

def cmd_validate(args):
    alg = load(args.algebra, check_valid=False)
    rep = validate(alg)
    lines = [f"{alg.name or args.algebra}: order {alg.order}"]
    for g in GROUPS:
        ok = rep.verdicts.get(g, True)
        extra = "" if ok else f"  witness: {_wit(alg, rep.witnesses[g])}"
        lines.append(f"  {g:<12} {_yes(ok)}{extra}")
    lines.append("valid skew lattice" if rep.ok else "not a skew lattice")
    payload = {"algebra": alg.name, "order": alg.order, "valid": rep.ok,
               "groups": {g: rep.verdicts.get(g, True) for g in GROUPS},
               "witnesses": {g: [w[0]] + [alg.label(v) for v in w[1:]]
                             for g, w in rep.witnesses.items()}}
    return CommandOutcome(OK if rep.ok else INVALID, "\n".join(lines), payload)


def _report_lines(alg, rep):
    agree = "agree" if rep.method_agreement else "DISAGREE"
    lines = [f"{rep.property.value}: {_yes(rep.verdict)}"]
    if not rep.verdict and rep.witness is not None:
        lines.append(f"  witness: {rep.witness.describe(alg)}")
    lines.append(f"  methods ({agree}): " + ", ".join(
        f"{m.name}={_yes(m.verdict)}" for m in rep.methods))
    if rep.omitted:
        lines.append("  omitted: " + ", ".join(rep.omitted))
    return lines


def cmd_check(args):
    alg = load(args.algebra)
    if "=" in args.property:
        return _check_equation(alg, args.property, args.budget)
    try:
        prop = PropertyId.parse(args.property)
    except ValueError as exc:
        raise _Failure(USAGE, str(exc)) from None
    rep = check(alg, prop, budget=args.budget)
    return CommandOutcome(OK if rep.verdict else FAILS, "\n".join(_report_lines(alg, rep)),
                          rep.to_json(alg))


def _check_equation(alg, text, budget):
    try:
        if "=>" in text:
            eq, method = parse_quasi(text), "exhaustive quasi-identity scan"
            res = check_quasi_identity(alg, eq, budget=budget)
        else:
            eq, method = parse_identity(text), "exhaustive identity scan"
            res = holds(alg, eq, budget=budget)
    except (ParseError, ValueError) as exc:
        raise _Failure(USAGE, f"cannot parse {text!r}: {exc}") from None
    lines = [f"{text}: {_yes(res.holds)}"]
    if not res.holds:
        lines.append(f"  witness: {res.describe(alg)}")
    lines.append(f"  methods: {method}={_yes(res.holds)}")
    payload = {"equation": text, "verdict": res.holds, "methods": [method]}
    if not res.holds:
        payload["witness"] = res.describe(alg)
    return CommandOutcome(OK if res.holds else FAILS, "\n".join(lines), payload)


def cmd_analyze(args):
    alg = load(args.algebra)
    reports = full_report(alg, budget=args.budget)
    v = {r.property: r.verdict for r in reports}
    imps = implications(v, alg)
    lines = [f"{alg.name or args.algebra}: order {alg.order}, handedness {handedness(alg) or 'mixed'}"]
    for rep in reports:
        lines.extend(_report_lines(alg, rep))
    bad = [n for n, ok in imps if not ok]
    lines.append(f"implications: {len(imps) - len(bad)}/{len(imps)} satisfied")
    lines.extend(f"  VIOLATED: {n}" for n in bad)
    disagree = [r.property.value for r in reports if not r.method_agreement]
    lines.extend(f"  METHOD DISAGREEMENT: {p}" for p in disagree)
    payload = {"algebra": alg.name, "order": alg.order, "handedness": handedness(alg),
               "properties": [r.to_json(alg) for r in reports],
               "implications": [{"name": n, "holds": ok} for n, ok in imps]}
    return CommandOutcome(FAILS if bad or disagree else OK, "\n".join(lines), payload)


def cmd_green(args):
    alg = load(args.algebra)
    d = relation_D(alg)
    co = natural_orders(alg).class_order
    lines = [f"{alg.name or args.algebra}: order {alg.order}, handedness {handedness(alg) or 'mixed'}",
             f"D-classes ({len(d.classes)}):"]
    for i, c in enumerate(d.classes):
        above = [str(k) for k in range(len(d.classes)) if k != i and co[k, i]]
        lines.append(f"  D{i} {_labels(alg, c)}  classes above: {', '.join(above) or '-'}")
    lines.append("R-classes: " + " ".join(_labels(alg, c) for c in relation_R(alg).classes))
    lines.append("L-classes: " + " ".join(_labels(alg, c) for c in relation_L(alg).classes))
    lat = lattice_image(alg)
    first, second = verify_first_decomposition(alg), verify_second_decomposition(alg)
    lines.append(f"lattice image: order {lat.order}")
    lines.append(f"first decomposition: {_yes(first.ok)}; second decomposition: {_yes(second.ok)}")
    payload = {"algebra": alg.name, "handedness": handedness(alg),
               "d_classes": [[alg.label(x) for x in c] for c in d.classes],
               "r_classes": [[alg.label(x) for x in c] for c in relation_R(alg).classes],
               "l_classes": [[alg.label(x) for x in c] for c in relation_L(alg).classes],
               "class_order": co.astype(int).tolist(),
               "first_decomposition": first.checks, "second_decomposition": second.checks}
    return CommandOutcome(OK if first.ok and second.ok else FAILS, "\n".join(lines), payload)


def cmd_cosets(args):
    alg = load(args.algebra)
    x, y = _class_of(alg, _element(alg, args.x)), _class_of(alg, _element(alg, args.y))
    try:
        dec = cosets(alg, x, y, args.kind)
    except ClassesNotComparable as exc:
        raise _Failure(USAGE, str(exc)) from None
    lines = [f"cosets of D{x} in D{y} ({dec.kind}), omega={dec.omega}"]
    lines.extend(f"  {_labels(alg, c)}" for c in dec.cosets)
    payload = {"acting": x, "target": y, "kind": dec.kind, "omega": dec.omega,
               "cosets": [[alg.label(e) for e in c] for c in dec.cosets]}
    return CommandOutcome(OK, "\n".join(lines), payload)


def cmd_midpoints(args):
    alg = load(args.algebra)
    a, c = _element(alg, args.a), _element(alg, args.c)
    ca, cc = _class_of(alg, a), _class_of(alg, c)
    chains = [ch for ch in skew_chains(alg) if ch.A == ca and ch.C == cc]
    if not chains:
        return CommandOutcome(FAILS, f"no skew chain has {alg.label(a)} on top and {alg.label(c)} "
                              "at the bottom", {"chains": []})
    lines, out = [], []
    for ch in chains:
        try:
            mid = midpoints(ch, a, c)
        except NotAbove as exc:
            return CommandOutcome(FAILS, str(exc), {"chains": [], "error": str(exc)})
        part = ac_components(ch)
        cond = chain_conditions(ch)
        lines.append(f"chain D{ch.A} > D{ch.B} > D{ch.C}: midpoints {_labels(alg, mid.midpoints)}")
        lines.append("  components: " + " ".join(_labels(alg, k) for k in part.components))
        lines.append(f"  distributive: {cond.distributive}; one midpoint per component: "
                     f"{cond.unique_midpoints}; conditions agree: {cond.agree}")
        out.append({"chain": [ch.A, ch.B, ch.C], "midpoints": [alg.label(b) for b in mid.midpoints],
                    "components": [[alg.label(b) for b in k] for k in part.components],
                    "distributive": cond.distributive, "conditions_agree": cond.agree})
    return CommandOutcome(OK, "\n".join(lines), {"a": alg.label(a), "c": alg.label(c), "chains": out})


def cmd_subalg(args):
    alg = load(args.algebra)
    if args.find:
        try:
            pat = pattern(args.find)
        except (UnknownAlgebra, ParseError, InvalidAlgebraError, OSError, ValueError) as exc:
            raise _Failure(INVALID, f"cannot load pattern {args.find}: {exc}") from None
        emb = find_embedding(alg, pat)
        if emb is None:
            return CommandOutcome(FAILS, f"{args.find} does not embed (exhaustive search)",
                                  {"pattern": args.find, "embedding": None})
        mapping = {pat.label(p): alg.label(x) for p, x in sorted(emb.items())}
        text = f"{args.find} embeds: " + ", ".join(f"{p}->{x}" for p, x in mapping.items())
        return CommandOutcome(OK, text, {"pattern": args.find, "embedding": mapping})
    try:
        subs = all_subalgebras(alg, cap=args.cap)
    except CapExceeded as exc:
        raise _Failure(USAGE, f"{exc}; raise --cap") from None
    lines = [f"{len(subs)} subalgebras"] + [f"  {_labels(alg, s.elements)}" for s in subs]
    payload = {"count": len(subs), "subalgebras": [[alg.label(e) for e in s.elements] for s in subs]}
    return CommandOutcome(OK, "\n".join(lines), payload)


def cmd_search(args):
    shape = tuple(int(t) for t in _list(args.chain)) or None
    try:
        cons = SearchConstraint(args.order, _list(args.require), _list(args.forbid),
                                args.handed, shape)
    except (SearchError, ValueError) as exc:
        raise _Failure(USAGE, str(exc)) from None
    workers = args.workers if args.seed_order == "parallel" else 1
    res = enumerate_models(cons, limit=args.limit, timeout=args.timeout, workers=workers)
    files = None
    if args.out:
        write_results(res, args.out)
        files = [f"{h.name}.skt" for h in res.hits]
    lines = [f"status: {res.status}" + (f" ({res.stopped_by})" if res.stopped_by else ""),
             f"hits: {len(res.hits)}",
             "scope: " + ", ".join(f"{k}={v}" for k, v in res.scope.items())]
    lines.extend(f"  {h.name} {canonical_form(h).hex()}" for h in res.hits)
    if args.out:
        lines.append(f"written to {args.out}")
    return CommandOutcome(OK if res.hits else FAILS, "\n".join(lines), res.manifest(files))


def cmd_corpus(args):
    if args.action == "list":
        names = builtin_names()
        return CommandOutcome(OK, "\n".join(names), {"builtins": names})
    if not args.name:
        raise _Failure(USAGE, "corpus emit needs a name")
    try:
        text = emit(args.name)
    except UnknownAlgebra:
        raise _Failure(INVALID, f"unknown builtin {args.name}") from None
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        return CommandOutcome(OK, f"wrote {args.output}", {"written": args.output})
    return CommandOutcome(OK, text.rstrip("\n"), {"name": args.name, "text": text})


def cmd_export_dot(args):
    alg = load(args.algebra)
    if args.kind == "d-classes":
        dot = dot_d_classes(alg)
    elif args.kind == "natural-order":
        dot = dot_natural_order(alg)
    else:
        chains = skew_chains(alg)
        if not chains:
            raise _Failure(USAGE, "algebra has no skew chain of three classes")
        if not 0 <= args.chain < len(chains):
            raise _Failure(USAGE, f"--chain must be in 0..{len(chains) - 1}")
        dot = dot_coset_grid(chains[args.chain])
    if args.output:
        Path(args.output).write_text(dot, encoding="utf-8")
        return CommandOutcome(OK, f"wrote {args.output}", {"written": args.output})
    return CommandOutcome(OK, dot.rstrip("\n"), {"dot": dot})


def cmd_harness(args):
    selected = {int(t) for t in _list(args.criteria)} or None
    if args.timeout is not None:
        _harness.SEARCH_TIMEOUT = args.timeout
    echo = None if args.json else (lambda s: print(s, flush=True))
    results = _harness.run_all(selected, echo=echo)
    passed = sum(r.passed for r in results)
    text = f"{passed}/{len(results)} criteria pass"
    if echo is None:
        text = "\n".join([r.line() for r in results] + [text])
    return CommandOutcome(OK if passed == len(results) else FAILS, text,
                          {"criteria": [r.to_json() for r in results]})


# -- parser --------------------------------------------------------------------------------------

def _common(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--json", action="store_true", default=d(False), help="JSON payload output")
    p.add_argument("--timeout", type=float, default=d(None), help="wall-clock limit in seconds")
    p.add_argument("--budget", type=int, default=d(None), help="cap on term evaluations")
    p.add_argument("--workers", type=int, default=d(1), help="worker processes")
    p.add_argument("--seed-order", choices=("single", "parallel"), default=d("single"),
                   help="search skeletons in one process or spread over --workers")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="skewlat", description="Finite skew-lattice workbench.")
    _common(top, False)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        _common(p, True)
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "check the skew-lattice axioms")
    p.add_argument("algebra")
    p = add("analyze", cmd_analyze, "every property plus the implication suite")
    p.add_argument("algebra")
    p = add("check", cmd_check, "decide one property, identity or quasi-identity")
    p.add_argument("property")
    p.add_argument("algebra")
    p = add("green", cmd_green, "Green's relations and decompositions")
    p.add_argument("algebra")
    p = add("cosets", cmd_cosets, "cosets of the class of X in the class of Y")
    p.add_argument("algebra")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--kind", choices=("classical", "generalized"), default="classical")
    p = add("midpoints", cmd_midpoints, "midpoint sets and AC-components for a > c")
    p.add_argument("algebra")
    p.add_argument("a")
    p.add_argument("c")
    p = add("subalg", cmd_subalg, "list subalgebras or find an embedding")
    p.add_argument("algebra")
    p.add_argument("--find", metavar="m3|n5|spinks9|FILE")
    p.add_argument("--cap", type=int, default=10, help="largest order to enumerate")
    p = add("search", cmd_search, "enumerate models under constraints")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--chain", help="class sizes top to bottom, e.g. 2,8,2")
    p.add_argument("--handed", choices=("left", "right"))
    p.add_argument("--require", default="")
    p.add_argument("--forbid", default="")
    p.add_argument("--limit", type=int)
    p.add_argument("--out", help="directory for hit files and manifest.json")
    p = add("corpus", cmd_corpus, "list or emit builtin algebras")
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("name", nargs="?")
    p.add_argument("-o", "--output")
    p = add("export-dot", cmd_export_dot, "Graphviz export")
    p.add_argument("algebra")
    p.add_argument("--kind", choices=("d-classes", "natural-order", "coset-grid"),
                   default="d-classes")
    p.add_argument("--chain", type=int, default=0, help="skew chain index for coset-grid")
    p.add_argument("-o", "--output")
    p = add("harness", cmd_harness, "run the acceptance suite")
    p.add_argument("--criteria", help="comma-separated criterion numbers")
    return top


def run(argv=None) -> CommandOutcome:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _Failure as exc:
        return CommandOutcome(exc.code, str(exc), {"error": str(exc), "exit": exc.code})
    except BudgetExceeded as exc:
        return CommandOutcome(USAGE, f"budget exceeded: {exc}", {"error": str(exc), "exit": USAGE})
    except (ChainNotDistributive, CosetGeometryError) as exc:
        return CommandOutcome(FAILS, str(exc), {"error": str(exc), "exit": FAILS})


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if any(a in ("-h", "--help") for a in argv):
        build_parser().parse_args(argv)  # argparse prints help and exits 0
    out = run(argv)
    as_json = "--json" in argv
    text = out.render(as_json)
    if text:
        print(text, file=sys.stdout if out.exit_code in (OK, FAILS) else sys.stderr)
    return out.exit_code


if __name__ == "__main__":
    sys.exit(main())
