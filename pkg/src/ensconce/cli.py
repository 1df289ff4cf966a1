"""``ensconce`` command line.

Exit status: 0 on success or all PASS, 1 when a postulate or theorem check
fails or a counterexample is found, 2 on bad input.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence, TextIO

from .ensconcement import Ensconcement, load, validate
from .logic import LogicError, parse, render
from .operators import (BrutalContraction, DerivedEntrenchment, SevereWithdrawal,
                        severe_withdraw_base)
from .oracle import GenerationExhausted, GeneratorConfig, verify_theorem
from .postulates import (CATALOG, DEFAULT_FAMILY, FAMILIES, SUITES, check_postulate,
                         check_suite, search_counterexample)

OK, FAILED, BAD_INPUT = 0, 1, 2
ROUNDTRIP = ("thm1-roundtrip", "thm2-bridge", "thm3-closure", "thm4-roundtrip")
_SUITE_KIND = {"brutal-base": "base", "bounded-brutal-base": "base",
               "severe-withdrawal": "withdrawal", "ensconcement-severe": "withdrawal",
               "entrenchment": "entrenchment"}


class InputError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ensconce",
                                description="Belief change over ranked finite bases.")
    sub = p.add_subparsers(dest="command", required=True)

    based = argparse.ArgumentParser(add_help=False)
    based.add_argument("-b", "--base", required=True, metavar="FILE",
                       help="ensconcement file")
    based.add_argument("--lift-tautologies", action="store_true",
                       help="move tautologies above every other member before validating")

    c = sub.add_parser("contract", parents=[based], help="brutal base contraction")
    c.add_argument("-f", "--formula", required=True)

    w = sub.add_parser("withdraw", parents=[based], help="severe withdrawal on Cn(A)")
    w.add_argument("-f", "--formula", required=True)
    w.add_argument("--member", action="append", default=[], metavar="FORMULA")

    e = sub.add_parser("entrench", parents=[based], help="compare under derived entrenchment")
    e.add_argument("--compare", nargs=2, required=True, metavar=("F1", "F2"))

    k = sub.add_parser("check", parents=[based], help="check postulates")
    which = k.add_mutually_exclusive_group(required=True)
    which.add_argument("--suite", choices=sorted(SUITES))
    which.add_argument("--postulate", choices=sorted(CATALOG))
    k.add_argument("--family", choices=sorted(FAMILIES),
                   help="operator built from the base (default depends on the postulate)")
    k.add_argument("--records", action="store_true", help="key-value output")

    sub.add_parser("roundtrip", parents=[based], help="verify the bridge theorems on a base")

    s = sub.add_parser("search", help="search seeded random bases for a counterexample")
    s.add_argument("--postulate", required=True, choices=sorted(CATALOG))
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--budget", type=int, required=True)
    s.add_argument("--atoms", type=int, required=True)
    s.add_argument("--size", type=int, default=3, help="maximum base size")
    s.add_argument("--levels", type=int, default=3, help="number of rank levels")
    s.add_argument("--family", choices=sorted(FAMILIES))

    sub.add_parser("validate", parents=[based], help="report axiom violations")
    return p


def _load(args, strict: bool = True) -> Ensconcement:
    try:
        return load(args.base, lift=args.lift_tautologies, strict=strict)
    except OSError as exc:
        raise InputError(f"cannot read {args.base}: {exc.strerror}") from exc


def _formula(text: str, e: Ensconcement):
    try:
        return parse(text, e.sig)
    except LogicError as exc:
        raise InputError(f"bad formula {text!r}: {exc}") from exc


def _ordered(e: Ensconcement, fs) -> list[str]:
    return [render(f) for f in e.formulas if f in fs]


def _operator(family: str | None, kind: str, e: Ensconcement):
    build = FAMILIES[family or DEFAULT_FAMILY[kind]]
    return build(e)


def _run(args, out: TextIO) -> int:
    cmd = args.command
    if cmd == "search":
        if args.budget < 1:
            raise InputError("--budget must be at least 1")
        try:
            cfg = GeneratorConfig(seed=args.seed, atom_count=args.atoms,
                                  base_size=args.size, rank_levels=args.levels,
                                  sample_count=args.budget)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        found = search_counterexample(args.postulate, cfg, args.budget, args.family)
        if found is None:
            print("none found", file=out)
            return OK
        e, report = found
        out.write(str(e))
        print(report.line(), file=out)
        return FAILED

    if cmd == "validate":
        result = validate(_load(args, strict=False))
        for line in result.lines():
            print(line, file=out)
        return OK if result.ok else FAILED

    e = _load(args)
    if cmd == "contract":
        kept = BrutalContraction(e).contract(_formula(args.formula, e))
        for line in _ordered(e, kept):
            print(line, file=out)
        return OK
    if cmd == "withdraw":
        alpha = _formula(args.formula, e)
        queries = [_formula(m, e) for m in args.member]
        for line in _ordered(e, severe_withdraw_base(e, alpha)):
            print(line, file=out)
        w = SevereWithdrawal(e)
        for q in queries:
            print(f"{'MEMBER' if w.member(alpha, q) else 'NON-MEMBER'} {render(q)}", file=out)
        return OK
    if cmd == "entrench":
        a, b = (_formula(x, e) for x in args.compare)
        print(DerivedEntrenchment(e).compare(a, b), file=out)
        return OK
    if cmd == "check":
        if args.suite:
            op = _operator(args.family, _SUITE_KIND[args.suite], e)
            reports = check_suite(args.suite, op)
        else:
            op = _operator(args.family, CATALOG[args.postulate].kind, e)
            reports = [check_postulate(args.postulate, op)]
        if args.records:
            out.write("\n".join(r.record() for r in reports))
        else:
            out.writelines(r.line() + "\n" for r in reports)
        return OK if all(r.passed for r in reports) else FAILED
    if cmd == "roundtrip":
        reports = [verify_theorem(i, e) for i in ROUNDTRIP]
        for r in reports:
            print(f"{r.id}: {r.status}" + (f" {r.witness}" if r.witness else ""), file=out)
        return OK if all(r.passed for r in reports) else FAILED
    raise AssertionError(cmd)


def main(argv: Sequence[str] | None = None, out: TextIO | None = None,
         err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else BAD_INPUT
    try:
        return _run(args, out)
    except (InputError, LogicError, GenerationExhausted) as exc:
        print(f"ensconce: error: {exc}", file=err)
        return BAD_INPUT


def entry() -> None:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    sys.exit(main())
