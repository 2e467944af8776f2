"""Command-line front end.

Every subcommand prints a single JSON document (or CSV rows with --format
csv) to stdout.  Rationals are rendered as decimal-free "p/q" strings so no
rounding ever happens on the way out.  Exit codes: 0 success, 2 usage error,
3 an undetermined/unknown-convergence verdict, 4 certificate search
exhausted.
"""

from __future__ import annotations

import argparse
import decimal
import io
import json
import re
import sys
from fractions import Fraction

from . import extsum, goldbach, hermite
from .errors import (ClassUndetermined, ConvergenceUnknown, NotConvergentAtDepth,
                     PrecisionExhausted, SearchExhausted, SignUndetermined,
                     UnlimitedValue)
from .seqfield import DEFAULT_DEPTH
from .wattenberg import (DedekindNumber, dd_add, dd_neg, delta_d, embed, eps_d,
                         wst, zero_cut)

_SOFT_ERRORS = (ClassUndetermined, ConvergenceUnknown, NotConvergentAtDepth,
                SignUndetermined, UnlimitedValue, PrecisionExhausted)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    try:
        return Fraction(decimal.Decimal(text))
    except decimal.InvalidOperation as exc:
        raise ValueError(f"cannot parse rational {text!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    # The shared flags live on a parent parser with SUPPRESS defaults so they
    # can be given either before or after the subcommand (a subparser default
    # would otherwise clobber a value parsed by the main parser).
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=argparse.SUPPRESS,
                        help="inspection depth for sequence verdicts")
    common.add_argument("--tolerance", type=parse_rational,
                        default=argparse.SUPPRESS,
                        help="interval tolerance (p/q or decimal)")
    common.add_argument("--format", choices=("json", "csv"),
                        default=argparse.SUPPRESS, dest="output_format")

    parser = argparse.ArgumentParser(
        prog="hyperline", parents=[common],
        description="exact arithmetic on the extended hyperreal line")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gb = sub.add_parser("goldbach", parents=[common],
                          help="perfect-power partial sum report")
    p_gb.add_argument("--limit", type=int, required=True)

    p_sieve = sub.add_parser("sieve", parents=[common],
                             help="stepwise Euler sieve")
    p_sieve.add_argument("--steps", type=int, required=True)

    p_ext = sub.add_parser("extsum", parents=[common],
                           help="flat sum of a series expression")
    p_ext.add_argument("--series", required=True,
                       help="geom(r) | pser(k) | powers_recip | harmonic | alt(...)")

    p_herm = sub.add_parser("hermite", parents=[common],
                            help="Hermite integers and certificates")
    herm_sub = p_herm.add_subparsers(dest="hermite_command", required=True)
    p_m = herm_sub.add_parser("m", parents=[common],
                              help="one Hermite integer M_k(n, p)")
    p_m.add_argument("--n", type=int, required=True)
    p_m.add_argument("--p", type=int, required=True)
    p_m.add_argument("--k", type=int, default=0)
    p_cert = herm_sub.add_parser("cert", parents=[common],
                                 help="nonvanishing certificate")
    p_cert.add_argument("--coeffs", required=True,
                        help="comma-separated rationals, e.g. 3,-1 or -87,32")
    p_cert.add_argument("--p-cap", type=int, default=10_000,
                        help="abort the prime search above this bound")

    p_dir = sub.add_parser("dirichlet", parents=[common],
                           help="continued-fraction convergents")
    p_dir.add_argument("--alpha", required=True, help="pi | e | p/q")
    p_dir.add_argument("--count", type=int, required=True)

    p_liou = sub.add_parser("liouville", parents=[common],
                            help="Liouville-constant approximation")
    p_liou.add_argument("--m", type=int, required=True)
    p_liou.add_argument("--n", type=int, required=True)

    p_wat = sub.add_parser("wat", parents=[common],
                           help="canonical-form expression calculator")
    p_wat.add_argument("--expr", required=True,
                       help='e.g. "1# + eps_d - eps_d"')
    return parser


def _apply_defaults(args):
    if getattr(args, "depth", None) is None:
        args.depth = 10_000 if args.command == "sieve" else DEFAULT_DEPTH
    if getattr(args, "tolerance", None) is None:
        args.tolerance = Fraction(1, 10 ** 6)
    if getattr(args, "output_format", None) is None:
        args.output_format = "json"


_TERM = re.compile(r"^(?:(?P<rat>-?\d+(?:/\d+)?)#|(?P<eps>eps_d)|(?P<delta>DELTA_d))$")


def eval_wat_expr(text: str, depth: int = DEFAULT_DEPTH) -> DedekindNumber:
    tokens = text.replace("+", " + ").replace("-", " - ").split()
    result = zero_cut()
    sign = 1
    expect_term = True
    seen_term = False
    for token in tokens:
        if token in "+-":
            if expect_term:
                if seen_term:
                    raise ValueError(f"misplaced operator in {text!r}")
                sign *= -1 if token == "-" else 1  # unary sign on the first term
                continue
            sign = 1 if token == "+" else -1
            expect_term = True
            continue
        match = _TERM.match(token)
        if not match:
            raise ValueError(f"bad term {token!r}")
        if match.group("rat"):
            term = embed(Fraction(match.group("rat")))
        elif match.group("eps"):
            term = eps_d()
        else:
            term = delta_d()
        if sign < 0:
            term = dd_neg(term)
        result = dd_add(result, term, depth)
        sign = 1
        expect_term = False
        seen_term = True
    if expect_term:
        raise ValueError(f"trailing operator in {text!r}")
    return result


def _interval_pair(interval):
    if interval is None:
        return None
    return [str(interval.lo), str(interval.hi)]


def _run_command(args) -> dict:
    if args.command == "goldbach":
        return goldbach.goldbach_report(args.limit)
    if args.command == "sieve":
        return goldbach.euler_sieve(args.depth, args.steps).to_dict()
    if args.command == "extsum":
        spec = extsum.parse_series(args.series)
        result = extsum.flat_sum(spec, depth=args.depth)
        wst_interval = None
        if not result.divergent:
            try:
                wst_interval = wst(result.value, args.tolerance, args.depth)
            except (NotConvergentAtDepth, UnlimitedValue):
                pass  # value stands on its own; the shadow is a bonus field
        return {
            "series": spec.label,
            "value": result.value.render(),
            "divergent": result.divergent,
            "eta_interval": _interval_pair(result.eta_interval),
            "wst_interval": _interval_pair(wst_interval),
        }
    if args.command == "hermite":
        if args.hermite_command == "m":
            return {"M": str(hermite.hermite_M(args.n, args.p, args.k))}
        cert = hermite.nonvanish_certificate(
            [parse_rational(c) for c in args.coeffs.split(",")],
            p_cap=args.p_cap)
        return cert.to_dict()
    if args.command == "dirichlet":
        if args.alpha == "pi":
            alpha = hermite.pi_oracle
        elif args.alpha == "e":
            alpha = hermite.e_oracle
        else:
            alpha = parse_rational(args.alpha)
        convergents = hermite.cf_convergents(alpha, args.count)
        return {
            "alpha": args.alpha,
            "convergents": [{"p": str(c.p), "q": str(c.q),
                             "abs_err_upper": str(c.error_bound.hi)}
                            for c in convergents],
        }
    if args.command == "liouville":
        convergent, holds = hermite.liouville_approx(args.m, args.n)
        return {
            "m": args.m,
            "n": args.n,
            "p": str(convergent.p),
            "q": str(convergent.q),
            "error_interval": _interval_pair(convergent.error_bound),
            "bound_holds": holds,
        }
    if args.command == "wat":
        value = eval_wat_expr(args.expr, args.depth)
        return {"expr": args.expr, "canonical": value.render()}
    raise AssertionError(f"unhandled command {args.command}")


def _csv_rows(doc: dict):
    list_key = next((k for k, v in doc.items()
                     if isinstance(v, list) and v and isinstance(v[0], dict)), None)
    if list_key is None:
        yield list(doc.keys())
        yield [_csv_cell(v) for v in doc.values()]
        return
    header = list(doc[list_key][0].keys())
    yield header
    for row in doc[list_key]:
        yield [_csv_cell(row.get(k)) for k in header]


def _csv_cell(value):
    if isinstance(value, (list, dict)):
        return json.dumps(value)
    return "" if value is None else str(value)


def render(doc: dict, output_format: str) -> str:
    if output_format == "json":
        return json.dumps(doc, indent=2)
    out = io.StringIO()
    for row in _csv_rows(doc):
        out.write(",".join(str(c) for c in row) + "\n")
    return out.getvalue().rstrip("\n")


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    _apply_defaults(args)
    try:
        doc = _run_command(args)
    except SearchExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except _SOFT_ERRORS as exc:
        print(f"undetermined: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(render(doc, args.output_format))
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
