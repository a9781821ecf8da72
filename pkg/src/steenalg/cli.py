"""Command-line front end.

Exit codes: 0 success / pass, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import divided_powers as dpw
from . import milnor, oracle, pbw, steenrod
from .fpnum import PrimeError, check_prime
from .liesuper import LieSuperData, MalformedData, check_axioms

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _prime(args) -> int:
    try:
        return check_prime(args.p)
    except PrimeError as exc:
        raise UsageError(str(exc)) from exc


def _emit_element(el, args):
    print(_dump(el.to_json()) if args.json else steenrod.render(el))


# -- Steenrod algebra -------------------------------------------------------


def cmd_mul(args) -> int:
    p = _prime(args)
    a = steenrod.parse_expr(args.left, p)
    b = steenrod.parse_expr(args.right, p)
    _emit_element(steenrod.mul(a, b), args)
    return OK


def cmd_reduce(args) -> int:
    p = _prime(args)
    el = steenrod.parse_expr(args.expr, p)
    out = steenrod.SteenrodElement.zero(p)
    for word, c in el.word_terms().items():
        out = out + steenrod.adem_reduce(steenrod.SteenrodMonomial.from_word(p, word), strategy=args.strategy).scale(c)
    _emit_element(out, args)
    return OK


def cmd_basis(args) -> int:
    p = _prime(args)
    mons = steenrod.basis(p, args.deg)
    if args.json:
        print(_dump({"p": p, "degree": args.deg, "basis": [{"exponents": list(m.exponents), "bocksteins": list(m.bocksteins)} for m in mons]}))
    else:
        for m in mons:
            print(m)
    return OK


def cmd_dim(args) -> int:
    p = _prime(args)
    k = args.deg
    if args.verify:
        core = steenrod.dim(p, k)
        if args.seed is not None:
            orc = oracle.naive_dim(p, k, order_seed=args.seed)
        else:
            orc = oracle.dim_oracle(p, k)
        rel = "==" if core == orc else "!="
        if args.json:
            print(_dump({"p": p, "degree": k, "core": core, "oracle": orc, "match": core == orc}))
        else:
            print(f"{core} (core) {rel} {orc} (oracle)")
        return OK if core == orc else FAIL
    value = oracle.dim_oracle(p, k) if args.oracle else steenrod.dim(p, k)
    print(_dump({"p": p, "degree": k, "dim": value}) if args.json else value)
    return OK


# -- obstruction ------------------------------------------------------------


def _table(report: pbw.ObstructionReport) -> list[str]:
    p, prof = report.p, report.profile
    ks = range(1, prof.k_max + 1)
    width = max(3, len(str(prof.k_max)))
    rows = [
        ("k", [str(k) for k in ks]),
        ("dim A_k", [str(steenrod.dim(p, k)) for k in ks]),
        ("dim g_k", [str(prof.dim(k)) for k in ks]),
    ]
    return [f"{name:<8}" + "".join(f"{v:>{width + 1}}" for v in vals) for name, vals in rows]


def cmd_obstruct(args) -> int:
    p = _prime(args)
    report = pbw.run_obstruction(p, args.mode, k_max=args.kmax)
    if args.json:
        print(report.dumps())
    else:
        print(f"p = {p}, mode = {args.mode}, weights 1..{report.profile.k_max}")
        for line in _table(report):
            print(line)
        print(f"minimal weights: {report.profile.support()}")
        for c in report.certificates:
            print(f"[{c.verdict}] {c.name} ({c.branch}): {c.claim}")
            for key, val in c.witnesses.items():
                shown = steenrod.render(val) if isinstance(val, steenrod.SteenrodElement) else val
                print(f"    {key}: {shown}")
        print(report.verdict)
    return OK if report.verdict == pbw.NO_REALISATION else FAIL


# -- Lie superalgebras ------------------------------------------------------


def cmd_liecheck(args) -> int:
    path = Path(args.file)
    if not path.exists():
        bundled = Path(__file__).with_name("data") / path.name
        if not bundled.exists():
            raise UsageError(f"no such file: {args.file}")
        path = bundled
    try:
        data = LieSuperData.from_json(json.loads(path.read_text()))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"malformed structure constants: {exc}") from exc
    report = check_axioms(data)
    if args.json:
        print(_dump(report.to_json()))
    else:
        for r in report.results:
            status = "ok" if r.passed else "FAIL"
            print(f"{status:<4} {r.axiom} ({r.checked} cases)" + ("" if r.passed else f" witness: {_dump(r.witness)}"))
        print("PASS" if report.ok else "FAIL")
    return OK if report.ok else FAIL


# -- divided powers ---------------------------------------------------------


def _heights(args) -> dpw.Heights:
    p = _prime(args)
    return dpw.parse_heights(args.N, p, args.odd)


def _dp_json(f: dpw.DPElement):
    return [{"monomial": list(m), "coeff": c} for m, c in f.sorted_terms()]


def cmd_dpow_mul(args) -> int:
    ctx = _heights(args)
    f = dpw.parse_dp(args.left, ctx) * dpw.parse_dp(args.right, ctx)
    print(_dump({"p": ctx.p, "terms": _dp_json(f)}) if args.json else f)
    return OK


def cmd_dpow_bracket(args) -> int:
    ctx = _heights(args)
    D = dpw.derivation_bracket(dpw.parse_derivation(args.left, ctx), dpw.parse_derivation(args.right, ctx))
    if args.json:
        print(_dump({"p": ctx.p, "parity": D.parity, "coeffs": [_dp_json(f) for f in D.coeffs]}))
    else:
        print(D)
    return OK


# -- Milnor coproduct -------------------------------------------------------


def _parse_b_monomial(text: str, K: int):
    exps = [0] * K
    text = text.strip()
    if text in ("", "1"):
        return tuple(exps)
    for tok in text.split():
        name, _, e = tok.partition("^")
        if not (name.startswith("b") and name[1:].isdigit()):
            raise UsageError(f"bad generator {tok!r}")
        i = int(name[1:])
        if not 1 <= i <= K:
            raise UsageError(f"b{i} outside the truncation b1..b{K}")
        exps[i - 1] += int(e) if e else 1
    return tuple(exps)


def cmd_milnor(args) -> int:
    p = _prime(args)
    if args.K < 1:
        raise UsageError("--K must be at least 1")
    if args.action == "coassoc":
        report = milnor.check_coassociativity(p, args.K)
        if args.json:
            print(_dump(report.to_json()))
        else:
            for f in report.failures:
                print(f"FAIL k={f['k']} {f['axiom']}")
            print("PASS" if report.ok else "FAIL")
        return OK if report.ok else FAIL
    if args.mono is None:
        raise UsageError("milnor coproduct needs a monomial, e.g. 'b2' or 'b1^2 b2'")
    t = milnor.coproduct(_parse_b_monomial(args.mono, args.K), p, args.K)
    print(t.dumps() if args.json else t)
    return OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="steenalg", description="Exact computations in the Steenrod algebra and related structures.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_, p_default=2):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--p", type=int, default=p_default, help="prime (default %(default)s)")
        sp.add_argument("--json", action="store_true", help="canonical JSON output")
        sp.set_defaults(func=func)
        return sp

    sp = add("mul", cmd_mul, "multiply two elements and reduce to admissible form")
    sp.add_argument("left")
    sp.add_argument("right")

    sp = add("reduce", cmd_reduce, "reduce an expression to admissible form")
    sp.add_argument("expr")
    sp.add_argument("--strategy", choices=("left", "right"), default="left")

    sp = add("basis", cmd_basis, "admissible basis in one degree")
    sp.add_argument("--deg", type=int, required=True)

    sp = add("dim", cmd_dim, "dimension in one degree")
    sp.add_argument("--deg", type=int, required=True)
    sp.add_argument("--oracle", action="store_true", help="use the relation-rank oracle")
    sp.add_argument("--verify", action="store_true", help="print admissible count and oracle rank")
    sp.add_argument("--seed", type=int, default=None, help="with --verify: full elimination with rows shuffled by this seed")

    sp = add("obstruct", cmd_obstruct, "run the PBW dimension obstruction")
    sp.add_argument("--mode", choices=pbw.MODES, default="nonrestricted")
    sp.add_argument("--kmax", type=int, default=None)

    sp = sub.add_parser("liecheck", help="check char-2 Lie superalgebra axioms of a JSON table")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_liecheck)

    for name, func, help_ in (
        ("dpow-mul", cmd_dpow_mul, "multiply divided-power polynomials"),
        ("dpow-bracket", cmd_dpow_bracket, "bracket of two derivations"),
    ):
        sp = add(name, func, help_)
        sp.add_argument("left")
        sp.add_argument("right")
        sp.add_argument("--N", default="inf", help="heights of the even variables, e.g. 2,1 or inf")
        sp.add_argument("--odd", type=int, default=0, help="number of odd variables")

    sp = add("milnor", cmd_milnor, "coproduct on the polynomial Hopf algebra F_p[b1..bK]")
    sp.add_argument("action", choices=("coproduct", "coassoc"))
    sp.add_argument("mono", nargs="?", default=None)
    sp.add_argument("--K", type=int, default=4)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, steenrod.ParseError, oracle.DegreeBoundError, milnor.TruncationError, MalformedData, PrimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
