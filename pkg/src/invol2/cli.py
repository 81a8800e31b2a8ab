"""Command-line front end.

Exit codes: 0 success, 1 verification failure or verdict mismatch,
2 malformed input, 3 degree budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import __version__
from .errors import DegreeOverflow, Invol2Error, ParseError, VerificationError
from .field import FieldCtx

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DEGREE = 0, 1, 2, 3


def _context(exprs, names):
    """A field over the given variable names, or over every identifier
    appearing in ``exprs``."""
    if names:
        return FieldCtx([v.strip() for v in names.split(",") if v.strip()])
    found = []
    for e in exprs:
        for tok in re.findall(r"[A-Za-z_]\w*", e):
            if tok not in found:
                found.append(tok)
    if not found:
        found = ["x"]
    return FieldCtx(found)


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_run(args):
    from .scenario import dumps, load_scenario, recheck, run_scenario

    if args.recheck:
        try:
            with open(args.recheck, encoding="utf-8") as fh:
                cert = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{args.recheck}: invalid JSON ({exc})") from None
        reports = recheck(cert)
        for r in reports:
            mark = "ok" if r["ok"] else f"FAILED {r['reason']}"
            print(f"[{r['index']}] {r['action']}: {mark}")
        failed = sum(not r["ok"] for r in reports)
        print(f"{len(reports) - failed}/{len(reports)} witnesses re-verified")
        return EXIT_OK if not failed else EXIT_FAIL
    sc = load_scenario(args.file)
    cert = run_scenario(sc, seed=args.seed, timings=not args.no_timings)
    _emit(dumps(cert), args.out)
    for r in cert["results"]:
        mark = "match" if r["match"] else "MISMATCH"
        print(f"[{r['index']}] {r['action']}: {r['verdict']} (expected {r['expected']}) {mark}",
              file=sys.stderr)
    return EXIT_OK if cert["all_match"] else EXIT_FAIL


def cmd_verify_paper(args):
    from .suite import run_suite, summary_json

    results = run_suite(seed=args.seed, scale=args.scale)
    if args.json:
        print(summary_json(results))
    else:
        for r in results:
            print(r.line())
        total = sum(r.seconds for r in results)
        passed = sum(r.passed for r in results)
        print(f"{passed}/{len(results)} criteria passed in {total:.1f}s")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_pfister(args):
    from .forms import PfisterForm, i_invariant

    F = _context(args.factors, args.vars)
    p = PfisterForm([F.parse(g) for g in args.factors], F)
    print(json.dumps({"form": p.to_json(), "entries": [str(e) for e in p.expansion.entries],
                      "i_invariant": i_invariant(p)}, indent=2))
    return EXIT_OK


def cmd_i_invariant(args):
    from .forms import PfisterForm, i_invariant

    F = _context(args.gens, args.vars)
    print(i_invariant(PfisterForm([F.parse(g) for g in args.gens], F)))
    return EXIT_OK


def cmd_represents(args):
    from .scenario import load_scenario
    from .structure import represents

    if args.scenario:
        D = load_scenario(args.scenario).build()
    else:
        from .structure import DecomposedAlgebra, quaternion_factor, split_factor

        F = _context([args.alpha] + args.factor, args.vars)
        factors = []
        for spec in args.factor:
            if spec == "m2t":
                factors.append(split_factor(F))
            else:
                a, _, b = spec.partition(",")
                if not b:
                    raise ParseError(f"factor {spec!r} must be 'alpha,beta' or 'm2t'")
                factors.append(quaternion_factor(F.parse(a), F.parse(b), ctx=F))
        if not factors:
            raise ParseError("give --scenario or at least one --factor")
        D = DecomposedAlgebra(factors)
    rep = represents(D, D.ctx.parse(args.alpha))
    out = {"algebra": repr(D), "alpha": args.alpha, "represented": rep.ok}
    if rep:
        out["witness"] = rep.witness.to_json()
    print(json.dumps(out, indent=2, ensure_ascii=False))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="invol2", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a scenario file and emit a certificate")
    p.add_argument("file", nargs="?")
    p.add_argument("--seed", type=int)
    p.add_argument("--recheck", metavar="CERT", help="re-verify a certificate instead")
    p.add_argument("--out", "-o", help="write the certificate here instead of stdout")
    p.add_argument("--no-timings", action="store_true", help="omit per-action timings")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify-paper", help="run the bundled acceptance suite")
    p.add_argument("--scale", type=int, default=1, help="4 adds degree-16 instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("pfister", help="expand a bilinear Pfister form")
    p.add_argument("factors", nargs="+")
    p.add_argument("--vars", help="comma-separated field variables (default: inferred)")
    p.set_defaults(func=cmd_pfister)

    p = sub.add_parser("i-invariant", help="i-invariant of a bilinear Pfister form")
    p.add_argument("gens", nargs="+")
    p.add_argument("--vars")
    p.set_defaults(func=cmd_i_invariant)

    p = sub.add_parser("represents", help="is alpha = sigma(x) x for some nonzero x?")
    p.add_argument("alpha")
    p.add_argument("--scenario", help="take the algebra from a scenario file")
    p.add_argument("--factor", action="append", default=[],
                   help="'alpha,beta' for ([alpha,beta),tau) or 'm2t'; repeatable")
    p.add_argument("--vars")
    p.set_defaults(func=cmd_represents)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run" and not args.file and not args.recheck:
        parser.error("run needs a scenario file or --recheck")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DegreeOverflow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGREE
    except (VerificationError, Invol2Error) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
