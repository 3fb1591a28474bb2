"""Command line driver.

Every subcommand builds one or more law reports and prints them; the exit
code depends only on the reports: 0 when nothing FAILs, 1 otherwise. Usage,
parse and resource errors exit with 2.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from ..core.category import FinCategory, ResourceLimit, validate_category
from ..report import FAIL, PASS, LawReport
from .corpus import _BUILDERS, build, corpus, entry
from .formats import ParseError, category_from_data, parse_lax, parse_simplicial

SUBCOMMANDS = ("validate", "arrow", "kernels", "lax-check", "roundtrip", "nerve", "spindle", "supercoherence",
               "dec-match", "corpus-run")


class UsageError(Exception):
    pass


# -- inputs -----------------------------------------------------------------

class Input:
    """What ``--input`` named: a category (with its zero if known), a lax
    algebra, or a truncated simplicial category."""

    def __init__(self, kind, category=None, zero=None, lax=None, simplicial=None, label=""):
        self.kind = kind
        self.category = category
        self.zero = zero
        self.lax = lax
        self.simplicial = simplicial
        self.label = label


def load_input(source: str, zero=None) -> Input:
    if source in _BUILDERS:
        e = entry(source)
        return Input("category", build(source), zero if zero is not None else e.zero, label=source)
    path = Path(source)
    if not path.exists():
        raise UsageError(f"--input: no corpus entry or file named {source!r}")
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("syntax", e.msg, line=e.lineno) from None
    if isinstance(data, dict) and "levels" in data:
        return Input("simplicial", simplicial=parse_simplicial(text, name=path.stem), zero=zero, label=path.name)
    if isinstance(data, dict) and "K_obj" in data:
        d, C = parse_lax(text)
        return Input("lax", C, zero if zero is not None else C.zero, lax=d, label=path.name)
    C = category_from_data(data, name=path.stem)
    return Input("category", C, zero if zero is not None else C.zero, label=path.name)


def _category(inp: Input) -> FinCategory:
    if inp.category is None:
        raise UsageError(f"{inp.label} is not a category description")
    return inp.category


def _pointed(inp: Input, rep: LawReport):
    """The pointed category, or None after recording why not."""
    from ..arrow.pointed import CoalgebraLawViolation, NotPointed, make_pointed
    C = _category(inp)
    try:
        p = make_pointed(C, inp.zero)
    except NotPointed as e:
        rep.add("pointed", FAIL, (e.obj if e.obj is not None else C.name,), note=e.reason)
        return None
    except CoalgebraLawViolation as e:
        rep.add("pointed", FAIL, (e.witness,), note=e.law)
        return None
    rep.add("pointed", PASS, note=f"zero = {p.zero_name}")
    return p


def _kernels(p, rep: LawReport):
    from ..arrow.kernels import MissingKernel, find_kernels
    try:
        ks = find_kernels(p)
    except MissingKernel as e:
        rep.add("kernels exist", FAIL, (e.morphism,))
        return None
    rep.add("kernels exist", PASS)
    return ks


def _lax(inp: Input, rep: LawReport):
    if inp.lax is not None:
        return inp.lax
    from ..arrow.lax import kernel_functor
    p = _pointed(inp, rep)
    if p is None:
        return None
    ks = _kernels(p, rep)
    return None if ks is None else kernel_functor(ks)


# -- subcommands --------------------------------------------------------------

def cmd_validate(inp: Input, args):
    if inp.kind == "simplicial":
        from ..core.functor import functor_violation
        rep = LawReport(f"validate {inp.label}")
        for n, L in enumerate(inp.simplicial.levels):
            v = validate_category(L.C)
            rep.record(f"level {n} is a category", None if v.ok else str(v.violations[0]))
        for (n, i), op in sorted(inp.simplicial.faces.items()) + sorted(inp.simplicial.degeneracies.items()):
            F = op.as_functor()
            bad = functor_violation(F)
            rep.record(f"{op.name} at X{n} is a functor", None if bad is None else (str(bad),))
        return [rep]
    C = _category(inp)
    rep = LawReport(f"validate {C.name or inp.label}")
    v = validate_category(C)
    if v.ok:
        rep.add("category laws", PASS, note=f"{C.n_obj} objects, {C.n_mor} morphisms")
    for viol in v.violations:
        rep.add(viol.law, FAIL, viol.witness)
    if inp.zero is not None and v.ok:
        _pointed(inp, rep)
    return [rep]


def cmd_arrow(inp: Input, args):
    from ..arrow.arrow import build_arrow_category, check_comonad_laws
    C = _category(inp)
    rep = LawReport(f"arrow comonad on {C.name}")
    A = build_arrow_category(C)
    fails = check_comonad_laws(C)
    for law in ("counit-left", "counit-right", "coassociativity"):
        for label in ("object", "morphism"):
            name = f"{law} ({label})"
            hit = [w for l_, w in fails if l_ == name]
            rep.record(name, None if not hit else (hit[0],))
    rep.add("size of A(C)", PASS, note=f"{C.n_mor} objects, {A.n_squares} squares")
    return [rep]


def cmd_kernels(inp: Input, args):
    C = _category(inp)
    rep = LawReport(f"kernels of {C.name}")
    p = _pointed(inp, rep)
    if p is None:
        return [rep]
    ks = _kernels(p, rep)
    if ks is None:
        return [rep]
    viol = ks.violations()
    rep.record("kernel system", None if not viol else tuple(viol[0]))
    table = LawReport("kernel table")
    for f in range(C.n_mor):
        table.add(f"{C.morphisms[f]}", PASS, note=f"ker = {C.objects[int(ks.ker[f])]}, "
                                                  f"kappa = {C.morphisms[int(ks.kappa[f])]}")
    return [rep, table]


def cmd_lax_check(inp: Input, args):
    from ..arrow.lax import check_adjunction, check_lax_algebra
    rep = LawReport(f"lax-check {inp.label}")
    d = _lax(inp, rep)
    if d is None:
        return [rep]
    out = [rep, check_lax_algebra(d)]
    if out[1].ok:
        out.append(check_adjunction(d))
    return out


def cmd_roundtrip(inp: Input, args):
    from ..arrow.kernels import UniversalPropertyFailure
    from ..arrow.lax import check_lax_algebra, compare_kernel_systems, extract_kernels, kernel_functor
    from ..simplicial.kernels import decalage_match
    from ..simplicial.supercoherent import supercoherent_nerve
    C = _category(inp)
    rep = LawReport(f"roundtrip {C.name}")
    p = _pointed(inp, rep)
    if p is None:
        return [rep]
    ks = _kernels(p, rep)
    if ks is None:
        return [rep]
    d = kernel_functor(ks)
    lax = check_lax_algebra(d)
    out = [rep, lax]
    if not lax.ok:
        return out
    try:
        ks2 = extract_kernels(d)
    except UniversalPropertyFailure as e:
        rep.add("extract_kernels", FAIL, (e.f, e.g))
        return out
    rep.record("extract_kernels = find_kernels", None if ks2 == ks else (C.name,))
    out.append(compare_kernel_systems(ks, ks2).report)
    N = args.level if args.level is not None else 3
    m = decalage_match(p, supercoherent_nerve(d, N))
    out.append(m.report)
    return out


def cmd_nerve(inp: Input, args):
    from ..simplicial.nerve import nerve_structure
    from ..simplicial.supercoherent import check_supercoherence
    C = _category(inp)
    N = args.level if args.level is not None else 3
    x = nerve_structure(C, N)
    rep = check_supercoherence(x, require_terminal=False)
    rep.title = f"nerve of {C.name} up to level {N}"
    sizes = LawReport("nerve sizes")
    for n, L in enumerate(x.levels):
        sizes.add(f"N_{n}", PASS, note=f"{L.n_objects} chains")
    return [rep, sizes]


def cmd_spindle(inp: Input, args):
    from ..core.diagrams import chain
    from ..simplicial.levels import DiagramLevel
    from ..simplicial.spindle import check_bar_relations, spindle_op, spine_op
    C = _category(inp)
    N = args.level if args.level is not None else 3
    rep = LawReport(f"spindle and spine on {C.name}")
    for n in range(N + 1):
        L = DiagramLevel(chain(n), C)
        Y = L.objects()
        back = spine_op(C, n).obj(spindle_op(C, n).obj(Y))
        bad = np.nonzero(np.any(back != Y, axis=1))[0]
        rep.record(f"R{n} spindle{n} = id", None if not len(bad) else L.obj_name(Y[bad[0]]),
                   note=f"{len(Y)} chains")
    out = [rep]
    if inp.zero is not None or inp.lax is not None:
        d = _lax(inp, rep)
        if d is not None:
            out.append(check_bar_relations(d, min(N, 3)))
    return out


def cmd_supercoherence(inp: Input, args):
    from ..simplicial.supercoherent import (check_supercoherence, compare_levelwise, extended_nerve_ops,
                                            simplicial_decalage, supercoherent_nerve)
    if inp.kind == "simplicial":
        return [check_supercoherence(inp.simplicial)]
    rep = LawReport(f"supercoherence {inp.label}")
    d = _lax(inp, rep)
    if d is None:
        return [rep]
    N = args.level if args.level is not None else 4
    x = supercoherent_nerve(d, N)
    return [rep, check_supercoherence(x), compare_levelwise(simplicial_decalage(x), extended_nerve_ops(d.pointed, N),
                                                           shift=1)]


def cmd_dec_match(inp: Input, args):
    from ..arrow.pointed import make_pointed
    from ..simplicial.kernels import NoIsomorphism, PreconditionFailure, decalage_match
    from ..simplicial.supercoherent import supercoherent_nerve
    from ..arrow.kernels import UniversalPropertyFailure
    rep = LawReport(f"dec-match {inp.label}")
    if inp.kind == "simplicial":
        x = inp.simplicial
        X1 = x.levels[1].C
        zero = inp.zero
        if zero is None:
            s0 = x.degeneracies.get((0, 0))
            if s0 is None:
                raise UsageError("--zero is required when s0 is not supplied")
            zero = int(s0.obj(np.zeros((1, 1), dtype=np.int64))[0, 0])
        try:
            p = make_pointed(X1, zero)
        except ValueError as e:
            rep.add("pointed", FAIL, (str(zero),), note=str(e))
            return [rep]
    else:
        d = _lax(inp, rep)
        if d is None:
            return [rep]
        p = d.pointed
        x = supercoherent_nerve(d, args.level if args.level is not None else 3)
    try:
        m = decalage_match(p, x)
    except NoIsomorphism as e:
        rep.add("décalage is the extended nerve", FAIL, (str(e),))
        return [rep]
    except PreconditionFailure as e:
        rep.add(f"precondition {e.law}", FAIL, tuple(map(str, np.atleast_1d(e.witness))))
        return [rep]
    except UniversalPropertyFailure as e:
        rep.add("kernels from simplicial data", FAIL, (e.f, e.g))
        return [rep]
    return [rep, m.report]


def cmd_corpus_run(inp, args):
    """Every check on every corpus entry, in corpus order."""
    from ..arrow.kernels import MissingKernel, find_kernels
    from ..arrow.pointed import NotPointed, make_pointed
    out = []
    N = args.level if args.level is not None else 4
    for e in corpus():
        rep = LawReport(f"corpus {e.name}")
        v = validate_category(e.category)
        rep.record("category laws", None if v.ok else str(v.violations[0]))
        out.append(rep)
        out += cmd_arrow(Input("category", e.category, e.zero, label=e.name), args)
        if e.expectation == "not_pointed":
            try:
                make_pointed(e.category, e.zero)
                rep.add("expectation not_pointed", FAIL, (e.name,), note="a zero object was found")
            except NotPointed:
                rep.add("expectation not_pointed", PASS)
            continue
        if e.expectation == "missing_kernel":
            try:
                find_kernels(make_pointed(e.category, e.zero))
                rep.add("expectation missing_kernel", FAIL, (e.name,), note="all kernels found")
            except MissingKernel as err:
                rep.record("expectation missing_kernel", None if err.morphism == e.witness else (err.morphism,),
                           note=f"witness {err.morphism}")
            continue
        inp_e = Input("category", e.category, e.zero, label=e.name)
        ns = argparse.Namespace(level=3)
        out += cmd_kernels(inp_e, ns)[:1]
        out += cmd_roundtrip(inp_e, ns)
        out += cmd_spindle(inp_e, argparse.Namespace(level=3 if e.name != "finvect2" else 2))
        out += cmd_supercoherence(inp_e, argparse.Namespace(level=N))
    return out


COMMANDS = {
    "validate": cmd_validate, "arrow": cmd_arrow, "kernels": cmd_kernels, "lax-check": cmd_lax_check,
    "roundtrip": cmd_roundtrip, "nerve": cmd_nerve, "spindle": cmd_spindle, "supercoherence": cmd_supercoherence,
    "dec-match": cmd_dec_match, "corpus-run": cmd_corpus_run,
}


def exit_code(reports) -> int:
    """0 when no report contains a FAIL, 1 otherwise."""
    return 0 if all(r.ok for r in reports) else 1


def render(reports, fmt: str) -> str:
    if fmt == "structured":
        return "\n".join(r.to_records() for r in reports if r.checks)
    return "\n\n".join(r.to_text() for r in reports)


def build_parser():
    ap = argparse.ArgumentParser(prog="kernelcat", description="Check kernels, lax algebras and nerves of finite "
                                                               "pointed categories.")
    ap.add_argument("subcommand", choices=SUBCOMMANDS)
    ap.add_argument("--input", help="corpus entry name or path to a JSON description")
    ap.add_argument("--zero", help="id of the zero object")
    ap.add_argument("--level", type=int, help="truncation level (default depends on the subcommand)")
    ap.add_argument("--cap", type=int, help="morphism cap for materialized constructions (overrides KERNELCAT_CAP)")
    ap.add_argument("--format", choices=("text", "structured"), default="text")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.cap is not None:
        if args.cap <= 0:
            print("error: --cap must be positive", file=sys.stderr)
            return 2
        os.environ["KERNELCAT_CAP"] = str(args.cap)
    if args.level is not None and args.level < 0:
        print("error: --level must be non-negative", file=sys.stderr)
        return 2
    try:
        if args.subcommand == "corpus-run":
            inp = None
        else:
            if not args.input:
                raise UsageError(f"{args.subcommand} needs --input")
            inp = load_input(args.input, args.zero)
        reports = COMMANDS[args.subcommand](inp, args)
    except (UsageError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ResourceLimit as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return 2
    print(render(reports, args.format))
    if args.format == "text":
        print(f"\n{'FAIL' if exit_code(reports) else 'OK'}")
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
