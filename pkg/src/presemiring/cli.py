"""Command surface.

One executable, `presemiring`, with one subcommand per question the library
answers.  Every command reads a presentation file, prints a deterministic
verdict, and exits with a code that states the verdict class:

    0   Holds / Equal / AsymptoticallyGE / a completed report
    1   Refuted / Separated / NotEqual
    2   Unknown / Inconclusive / NotFoundInFamily
    3   usage errors, unreadable files, failed replays
    4   soundness errors (both a witness and a separator were found)

Output is byte-identical for identical inputs and flags; randomized suite
sampling is fixed by --seed.
"""

from __future__ import annotations

import argparse
import sys

from .asymptotic import (
    AsymptoticError,
    AsymptoticWitness,
    ConstantK,
    Horizon,
    Periodic,
    check_asymptotic,
    is_conclusive,
)
from .certificate import CertificateError, ReplayError
from .expr import Expr
from .family import FamilyError
from .grammar import ParseError, load_presentation, parse_expr
from .localization import (
    LocalizationError,
    LocHolds,
    NotEqual,
    frac_eq,
    frac_le,
    localize,
    replay_loc,
)
from .orderext import OrderExtensionError
from .presentation import Budget, Presentation, PresentationError
from .search import Holds, Refuted, Unknown, check_preorder
from .serialize import (
    SerializeError,
    certify_file,
    parse_certificate_file,
    write_certificate,
    write_witness,
)
from .spectrum import (
    AsymptoticallyGE,
    Inconclusive,
    MembershipCertificate,
    Separated,
    SoundnessError,
    SpectrumError,
    check_M1,
    check_M1prime,
    check_M2_evidence,
    check_M2prime_evidence,
    dual_compare,
    membership,
    replay_membership,
    separate,
)
from .suites import run_all

_USAGE_ERRORS = (
    ParseError,
    SerializeError,
    PresentationError,
    CertificateError,
    ReplayError,
    LocalizationError,
    SpectrumError,
    OrderExtensionError,
    AsymptoticError,
    FamilyError,
    OSError,
    ValueError,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _budget(args) -> Budget:
    return Budget(nodes=args.budget_nodes, degree=args.budget_deg, coeff=args.budget_coef)


def _budget_flags(sub) -> None:
    sub.add_argument("--budget-nodes", type=int, default=Budget().nodes, metavar="N")
    sub.add_argument("--budget-deg", type=int, default=Budget().degree, metavar="D")
    sub.add_argument("--budget-coef", type=int, default=Budget().coeff, metavar="C")


def _load(path: str) -> Presentation:
    return load_presentation(path)


def _expr(text: str, pres: Presentation) -> Expr:
    return parse_expr(text, pres.gens, "<argument>")


def _envelope_text(env) -> str:
    if isinstance(env, ConstantK):
        return f"constant {env.k}"
    if isinstance(env, Periodic):
        return "periodic " + ",".join(str(k) for k in env.ks)
    return f"horizon (n = {', '.join(str(n) for n, _ in env.entries)})"


def _write_out(path: str | None, text: str, what: str) -> None:
    if path is None:
        return
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
    print(f"{what} written to {path}")


# ---- subcommands ----


def _cmd_check(args) -> int:
    pres = _load(args.file)
    lhs, rhs = _expr(args.lhs, pres), _expr(args.rhs, pres)
    verdict = check_preorder(pres, lhs, rhs, _budget(args))
    if isinstance(verdict, Holds):
        print(f"Holds: {lhs} <= {rhs} (certificate size {verdict.certificate.size})")
        _write_out(args.out, write_certificate(pres, verdict.certificate), "certificate")
        return 0
    if isinstance(verdict, Refuted):
        print(
            f"Refuted: f({lhs}) = {verdict.lhs_value} > {verdict.rhs_value} = f({rhs}) "
            f"at {verdict.hom.describe()}"
        )
        return 1
    print(f"Unknown: {verdict.reason}")
    return 2


def _cmd_asym(args) -> int:
    pres = _load(args.file)
    lhs, rhs = _expr(args.lhs, pres), _expr(args.rhs, pres)
    try:
        verdict = check_asymptotic(pres, None, lhs, rhs, _budget(args), horizon=args.horizon)
    except AsymptoticError as exc:
        print(f"Unknown: {exc}")
        return 2
    if isinstance(verdict, AsymptoticWitness):
        if is_conclusive(verdict):
            print(f"AsymptoticallyLE: {lhs} <~ {rhs} (envelope {_envelope_text(verdict.envelope)})")
            _write_out(args.out, write_witness(pres, verdict), "witness")
            return 0
        print(f"Inconclusive: {_envelope_text(verdict.envelope)} evidence only, no schema")
        return 2
    if isinstance(verdict, Refuted):
        print(
            f"Refuted: f({lhs}) = {verdict.lhs_value} > {verdict.rhs_value} = f({rhs}) "
            f"at {verdict.hom.describe()}"
        )
        return 1
    print(f"Unknown: {verdict.reason}")
    return 2


def _cmd_separate(args) -> int:
    # every subcommand asks "is E1 below E2"; a separator is a monotone
    # homomorphism with f(E1) > f(E2), so the library search runs with the
    # arguments swapped (separate finds f(first) < f(second))
    pres = _load(args.file)
    lhs, rhs = _expr(args.lhs, pres), _expr(args.rhs, pres)
    hom = separate(pres, rhs, lhs, steps=args.grid)
    if hom is None:
        if pres.family is None:
            print("NotFoundInFamily: no homomorphism family attached to the presentation")
        else:
            print(f"NotFoundInFamily: no separator at grid resolution {args.grid}")
        return 2
    print(f"Separated: f({lhs}) = {hom.eval(lhs)} > {hom.eval(rhs)} = f({rhs}) at {hom.describe()}")
    return 1


def _cmd_dual(args) -> int:
    # "is E1 below E2", certified from both sides: a conclusive witness for
    # E2 >~ E1, or a separating homomorphism with f(E1) > f(E2)
    pres = _load(args.file)
    lhs, rhs = _expr(args.lhs, pres), _expr(args.rhs, pres)
    verdict = dual_compare(pres, rhs, lhs, budget=_budget(args), horizon=args.horizon, steps=args.grid)
    if isinstance(verdict, AsymptoticallyGE):
        w = verdict.witness
        print(f"AsymptoticallyGE: {rhs} >~ {lhs} (envelope {_envelope_text(w.envelope)})")
        _write_out(args.out, write_witness(pres, w), "witness")
        return 0
    if isinstance(verdict, Separated):
        print(
            f"Separated: f({lhs}) = {verdict.rhs_value} > {verdict.lhs_value} = f({rhs}) "
            f"at {verdict.hom.describe()}"
        )
        return 1
    print(f"Inconclusive: {verdict.reason}")
    return 2


def _cmd_member(args) -> int:
    pres = _load(args.file)
    element = _expr(args.element, pres)
    verdict = membership(pres, element, args.kind, bound=args.bound, budget=_budget(args))
    if isinstance(verdict, MembershipCertificate):
        replay_membership(pres, verdict)
        print(f"Holds: {element} in {args.kind} with n = {verdict.n}")
        return 0
    print(f"Unknown: {verdict.reason}")
    return 2


def _split_fraction(text: str, pres: Presentation) -> tuple[Expr, Expr]:
    parts = text.split("/")
    if len(parts) != 2:
        raise _UsageError(f"fraction argument must be 'NUM/DEN', got {text!r}")
    return _expr(parts[0].strip(), pres), _expr(parts[1].strip(), pres)


def _cmd_localize(args) -> int:
    pres = _load(args.file)
    loc = localize(pres)
    a_num, a_den = _split_fraction(args.lhs, pres)
    b_num, b_den = _split_fraction(args.rhs, pres)
    a = loc.frac(a_num, a_den)
    b = loc.frac(b_num, b_den)
    if args.relation == "eq":
        verdict = frac_eq(pres, loc, a, b, budget=_budget(args), r_degree=args.r_degree)
        if isinstance(verdict, NotEqual):
            print(
                f"NotEqual: f gives {verdict.lhs_value} != {verdict.rhs_value} "
                f"at {verdict.hom.describe()}"
            )
            return 1
        if isinstance(verdict, Unknown):
            print(f"Unknown: {verdict.reason}")
            return 2
        replay_loc(pres, loc, verdict)
        print(f"Equal: {a} = {b} (witness r = {verdict.r})")
        return 0
    verdict = frac_le(pres, loc, a, b, budget=_budget(args), r_degree=args.r_degree)
    if isinstance(verdict, LocHolds):
        replay_loc(pres, loc, verdict.certificate)
        print(f"Holds: {a} <= {b} (witness r = {verdict.certificate.r})")
        return 0
    print(f"Unknown: {verdict.reason}")
    return 2


def _cmd_conds(args) -> int:
    pres = _load(args.file)
    samples = None
    if args.samples:
        samples = [_expr(s, pres) for s in args.samples]
    budget = _budget(args)
    if args.condition == "m1":
        report = check_M1(pres, samples, m_degree=args.degree, bound=args.bound, budget=budget)
    elif args.condition == "m2":
        report = check_M2_evidence(pres, m_degree=args.degree, budget=budget)
    elif args.condition == "m1p":
        report = check_M1prime(pres, samples, m_degree=args.degree, bound=args.bound, budget=budget)
    else:
        report = check_M2prime_evidence(pres, m_degree=args.degree, budget=budget)
    print(report.describe())
    return 0 if report.ok else 2


def _cmd_certify(args) -> int:
    with open(args.certfile, "r", encoding="utf-8") as handle:
        text = handle.read()
    parsed = parse_certificate_file(text, args.certfile)
    print(certify_file(parsed, horizon=args.horizon))
    return 0


def _cmd_suite(args) -> int:
    pres = _load(args.file)
    results = run_all(pres, seed=args.seed)
    failed = 0
    for result in results:
        for row in result.rows:
            line = f"{result.name}: {row.name}: {row.status}"
            if row.detail:
                line += f" ({row.detail})"
            print(line)
            if row.status == "fail":
                failed += 1
    total = sum(len(r.rows) for r in results)
    skipped = sum(1 for r in results for row in r.rows if row.status == "skip")
    print(f"suites: {total - failed - skipped} passed, {failed} failed, {skipped} skipped")
    return 0 if failed == 0 else 3


# ---- argument wiring ----


def _build_parser() -> _Parser:
    parser = _Parser(prog="presemiring", description="certificates and separations for presented preordered semirings")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("check", help="decide E1 <= E2 in the presented preorder")
    p.add_argument("file")
    p.add_argument("lhs", metavar="E1")
    p.add_argument("rhs", metavar="E2")
    _budget_flags(p)
    p.add_argument("--out", metavar="PATH", help="write the certificate file here")
    p.set_defaults(run=_cmd_check)

    p = subs.add_parser("asym", help="decide E1 asymptotically below E2")
    p.add_argument("file")
    p.add_argument("lhs", metavar="E1")
    p.add_argument("rhs", metavar="E2")
    p.add_argument("--horizon", type=int, default=12)
    _budget_flags(p)
    p.add_argument("--out", metavar="PATH", help="write the witness file here")
    p.set_defaults(run=_cmd_asym)

    p = subs.add_parser("separate", help="search the family for f with f(E1) < f(E2)")
    p.add_argument("file")
    p.add_argument("lhs", metavar="E1")
    p.add_argument("rhs", metavar="E2")
    p.add_argument("--grid", type=int, default=5, metavar="G")
    p.set_defaults(run=_cmd_separate)

    p = subs.add_parser("dual", help="decide E1 >= E2 asymptotically from both sides")
    p.add_argument("file")
    p.add_argument("lhs", metavar="E1")
    p.add_argument("rhs", metavar="E2")
    p.add_argument("--horizon", type=int, default=12)
    p.add_argument("--grid", type=int, default=5, metavar="G")
    _budget_flags(p)
    p.add_argument("--out", metavar="PATH", help="write the witness file here")
    p.set_defaults(run=_cmd_dual)

    p = subs.add_parser("member", help="membership in S+, S-, or S_b")
    p.add_argument("file")
    p.add_argument("kind", choices=("splus", "sminus", "sb"))
    p.add_argument("element", metavar="E")
    p.add_argument("--bound", type=int, default=8)
    _budget_flags(p)
    p.set_defaults(run=_cmd_member)

    p = subs.add_parser("localize", help="compare fractions over the declared multiplicative set")
    p.add_argument("file")
    p.add_argument("lhs", metavar="E1/T1")
    p.add_argument("rhs", metavar="E2/T2")
    p.add_argument("relation", choices=("eq", "le"))
    p.add_argument("--r-degree", type=int, default=3)
    _budget_flags(p)
    p.set_defaults(run=_cmd_localize)

    p = subs.add_parser("conds", help="monomial invertibility and boundedness reports")
    p.add_argument("file")
    p.add_argument("condition", choices=("m1", "m2", "m1p", "m2p"))
    p.add_argument("--samples", nargs="+", metavar="E")
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--bound", type=int, default=16)
    _budget_flags(p)
    p.set_defaults(run=_cmd_conds)

    p = subs.add_parser("certify", help="replay a certificate or witness file")
    p.add_argument("certfile")
    p.add_argument("--horizon", type=int, default=12)
    p.set_defaults(run=_cmd_certify)

    p = subs.add_parser("suite", help="run the property suites against this presentation")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=_cmd_suite)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 3
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 3
    try:
        return args.run(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 3
    except SoundnessError as exc:
        print(f"soundness error: {exc}", file=sys.stderr)
        return 4
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
