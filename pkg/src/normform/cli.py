"""Command-line front end. Every subcommand writes CSV (with a header) or JSON."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from importlib import resources

import jsonschema
import numpy as np

from . import averages, expsums, ideals, normprimes, spectrum, varops
from .errors import NormformError, ResourceLimit
from .quadfield import build_field

EXIT_OK, EXIT_INVALID, EXIT_RESOURCE = 0, 2, 3


def _schema(name: str) -> dict:
    return json.loads(resources.files("normform").joinpath("schemas", name).read_text())


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _floats(text: str) -> list[float]:
    return [float(Fraction(t.strip())) for t in text.split(",") if t.strip()]


def _poly(text: str) -> expsums.IntPolynomial:
    return expsums.IntPolynomial.parse(text)


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    return str(v)


def _emit(args, columns, rows):
    rows = [[_cell(v) for v in row] for row in rows]
    if args.format == "json":
        doc = {"command": args.command, "columns": list(columns), "rows": rows}
        jsonschema.validate(doc, _schema("table.schema.json"))
        text = json.dumps(doc, indent=1) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
        text = buf.getvalue()
    _write(args, text)


def _write(args, text: str):
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _sieve(args, x: int):
    return normprimes.build_sieve(args.n, x, cache_dir=args.cache_dir, use_cache=not args.no_cache)


def cmd_sieve(args):
    s = _sieve(args, args.x)
    _emit(args, ["p"], [[int(p)] for p in s.members])


def cmd_expsum(args):
    F = build_field(args.n)
    P = _poly(args.poly)
    if args.decay:
        rows = expsums.decay_scan(F, P, args.q)
        _emit(args, ["q", "max_abs_S_over_q2"], rows)
        return
    if args.a is not None:
        fracs = [expsums.ReducedFraction(args.a, args.q)]
    else:
        fracs = [expsums.ReducedFraction(a, args.q) for a in range(args.q) if math.gcd(a, args.q) == 1]
    rows = []
    for fr in fracs:
        S = expsums.weyl_sum(F, P, fr)
        c = expsums.coefficient(F, P, fr)
        rows.append([fr.a, fr.q, S.real, S.imag, abs(S), c.real, c.imag])
    _emit(args, ["a", "q", "re", "im", "abs", "coef_re", "coef_im"], rows)


def cmd_spectrum_scan(args):
    F = build_field(args.n)
    P = _poly(args.poly)
    m = args.x
    if args.what == "sup-error":
        s = _sieve(args, m)
        alphas, err = spectrum.sup_error_table(s, F, P, m, args.B, args.grid)
        _emit(args, ["alpha", "err"], zip(alphas, err))
        return
    alphas = [Fraction(j, args.grid) for j in range(args.grid)]
    if args.what == "khat":
        s = _sieve(args, m)
        vals = spectrum.khat_grid(s, P, m, args.grid)
    else:
        vals = [spectrum.lhat_prime(F, P, m, args.B, a) for a in alphas]
    _emit(args, ["alpha", "re", "im", "abs"],
          [[float(a), v.real, v.imag, abs(v)] for a, v in zip(alphas, vals)])


def cmd_major_arc(args):
    F = build_field(args.n)
    P = _poly(args.poly)
    s = _sieve(args, max(args.xs))
    frac = expsums.ReducedFraction(args.a, args.q)
    alpha = Fraction(args.alpha) if args.alpha is not None else Fraction(args.a, args.q)
    rows = []
    for x in args.xs:
        lhs, main, res = spectrum.major_arc_residual(s, F, P, x, frac, alpha, args.B)
        rows.append([x, lhs.real, lhs.imag, main.real, main.imag, res])
    _emit(args, ["x", "lhs_re", "lhs_im", "main_re", "main_im", "residual_over_x"], rows)


def cmd_minor_arc(args):
    P = _poly(args.poly)
    s = _sieve(args, max(args.xs))
    rows = spectrum.minor_arc_scan(s, P, args.alphas, args.xs, args.B)
    _emit(args, ["alpha", "x", "value", "major"], rows)


def cmd_vaughan(args):
    F = build_field(args.n)
    rows = []
    for I in ideals.enumerate_ideals(F, args.x):
        if I.norm > args.U:
            S1, S2, S3, res = ideals.vaughan_check(F, I, args.U, args.V)
            rows.append([I.norm, repr(I), S1, S2, S3, ideals.von_mangoldt(I), res])
    _emit(args, ["norm", "ideal", "S1", "S2", "S3", "Lambda", "residual"], rows)


def cmd_residue(args):
    if args.Q is None:
        _emit(args, ["n", "p", "b", "count"],
              [[args.n, args.p, args.b, normprimes.residue_form_count(args.n, args.p, args.b)]])
        return
    s = _sieve(args, args.x)
    d = normprimes.pn_residue_density(args.n, args.Q, args.b, args.x, sieve=s)
    _emit(args, ["n", "Q", "b", "x", "density"], [[args.n, args.Q, args.b, args.x, d]])


def cmd_avg(args):
    P = _poly(args.poly)
    s = _sieve(args, max(args.scales))
    if args.N is not None:
        system = averages.ToySystem.cyclic(args.N, args.step)
        f = np.zeros(args.N)
        f[[i % args.N for i in args.indicator]] = 1.0
    else:
        system = averages.ToySystem()
        f = averages.Signal(args.indicator, np.ones(len(args.indicator)))
    seq = averages.avg_sequence(s, P, system, f, args.point, args.scales, args.weighted)
    _emit(args, ["m", "re", "im"], [[m, v.real, v.imag] for m, v in zip(args.scales, seq)])


def cmd_varcheck(args):
    rep = varops.random_corpus_report(args.seed, args.count, args.max_len)
    doc = {"command": "varcheck", "seed": args.seed, "count": args.count,
           "violations": rep.violations, "checks": rep.as_list()}
    jsonschema.validate(doc, _schema("report.schema.json"))
    if args.format == "csv":
        _emit(args, ["name", "checked", "violations", "max_slack"],
              [[e["name"], e["checked"], e["violations"], e["max_slack"]] for e in doc["checks"]])
    else:
        _write(args, json.dumps(doc, indent=1) + "\n")


def cmd_iw(args):
    cfg = spectrum.IWConfig(args.rho, args.N, args.q_cap)
    if args.heights:
        qs = spectrum.iw_denominators(cfg)
        _emit(args, ["q", "height"], [[q, spectrum.iw_height(args.rho, expsums.ReducedFraction(1, q))]
                                      for q in qs])
    elif args.q_cap is not None:
        _emit(args, ["q"], [[q] for q in spectrum.iw_denominators(cfg)])
    else:
        _emit(args, ["element"], [[q] for q in sorted(spectrum.iw_base_set(cfg))])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        help="csv (default) or json; varcheck defaults to json")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cache-dir", default=None,
                        help="sieve cache directory (default $NORMFORM_CACHE or ./cache)")
    common.add_argument("--no-cache", action="store_true")

    parser = argparse.ArgumentParser(prog="normform", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", parents=[common], help="primes u^2 + n v^2 up to x")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("expsum", parents=[common], help="complete sums S(a, q) and coefficients")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--poly", default="0,1")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, default=None)
    p.add_argument("--decay", action="store_true", help="table of max_a |S(a,q)|/q^2 for q <= Q")
    p.set_defaults(func=cmd_expsum)

    p = sub.add_parser("spectrum-scan", parents=[common], help="khat, lhat' or their gap on a grid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=int, required=True, help="scale m")
    p.add_argument("--poly", default="0,1")
    p.add_argument("--B", type=float, default=2.0)
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--what", choices=("khat", "lhat", "sup-error"), default="sup-error")
    p.set_defaults(func=cmd_spectrum_scan)

    p = sub.add_parser("major-arc", parents=[common], help="major-arc main term residuals")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--poly", default="0,1")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--alpha", default=None, help="frequency (default a/q); fractions allowed")
    p.add_argument("--xs", type=_ints, required=True)
    p.add_argument("--B", type=float, default=2.0)
    p.set_defaults(func=cmd_major_arc)

    p = sub.add_parser("minor-arc", parents=[common], help="normalized prime sums at given alphas")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--poly", default="0,1")
    p.add_argument("--alphas", type=_floats, required=True)
    p.add_argument("--xs", type=_ints, required=True)
    p.add_argument("--B", type=float, default=2.0)
    p.set_defaults(func=cmd_minor_arc)

    p = sub.add_parser("vaughan", parents=[common], help="Vaughan identity residuals per ideal")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--U", type=int, default=12)
    p.add_argument("--V", type=int, default=12)
    p.set_defaults(func=cmd_vaughan)

    p = sub.add_parser("residue", parents=[common], help="residue-class counts and densities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--Q", type=int, default=None)
    p.add_argument("--x", type=int, default=10**6)
    p.set_defaults(func=cmd_residue)

    p = sub.add_parser("avg", parents=[common], help="ergodic averages of an indicator")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--poly", default="0,1")
    p.add_argument("--scales", type=_ints, required=True)
    p.add_argument("--point", type=int, default=0)
    p.add_argument("--indicator", type=_ints, default=[0])
    p.add_argument("--N", type=int, default=None, help="cyclic system size (default integer shift)")
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--weighted", action="store_true")
    p.set_defaults(func=cmd_avg)

    p = sub.add_parser("varcheck", parents=[common], help="random-corpus inequality report")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--max-len", type=int, default=128)
    p.set_defaults(func=cmd_varcheck)

    p = sub.add_parser("iw", parents=[common], help="Ionescu-Wainger sets and heights")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--q-cap", type=int, default=None)
    p.add_argument("--heights", action="store_true")
    p.set_defaults(func=cmd_iw)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    if args.format is None:
        args.format = "json" if args.command == "varcheck" else "csv"
    if args.command == "residue" and args.p is None and args.Q is None:
        print("normform: residue needs --p or --Q", file=sys.stderr)
        return EXIT_INVALID
    try:
        args.func(args)
    except ResourceLimit as exc:
        print(f"normform: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (NormformError, ValueError) as exc:
        print(f"normform: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main():
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); keep the interpreter quiet at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)
