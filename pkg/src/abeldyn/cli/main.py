"""Command line entry point.

Exit codes: 0 success (expected-fail controls excluded), 1 an unexpected
failing verdict, 2 invalid input, 3 the root-isolation precision cap was hit.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from ..correspondence import degree_sequence, graded_action, lefschetz_number, total_degree
from ..errors import InputError, PrecisionError, RecurrenceError
from ..numerical import alg_tr_split, build_Nk
from ..abelian import is_polarized
from ..spectral import (
    chi,
    char_poly,
    is_semisimple,
    lambda_growth,
    lambda_numerical,
    min_poly,
)
from .config import load_config
from .report import emit, exit_code, validate
from .sampling import SuiteParams
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _coeffs(text: str) -> tuple[Fraction, ...]:
    return tuple(_fraction(t) for t in text.split(",") if t.strip())


def _interval(iv) -> str:
    lo, hi = iv.as_strings(15)
    return lo if iv.is_exact else f"[{lo}, {hi}]"


def _fmt(values) -> str:
    return "(" + ", ".join(str(v) for v in values) + ")"


def cmd_describe(args) -> int:
    config = load_config(args.config)
    v = config.variety
    model = v.cohomology
    print(f"variety: {v.describe()}  (n = {v.n})")
    for f in v.factors:
        print(f"  {f.curve_id}: multiplicity {f.multiplicity}, End = {f.order}")
    print(f"betti numbers: {_fmt(model.dim(i) for i in range(model.rank + 1))}")
    dims, splits = [], []
    for k in range(v.n + 1):
        lattice = build_Nk(v, k)
        dims.append(lattice.dimension)
        splits.append("ok" if alg_tr_split(v, k).succeeded else "FAILED")
    print(f"dim N^k: {_fmt(dims)}")
    print(f"alg/tr split of H^2k: {_fmt(splits)}")
    for name, f in config.endomorphisms.items():
        q = is_polarized(f)
        pol = f"polarized, q = {q}" if q is not None else "not polarized by θ"
        print(f"endomorphism {name}: {f!r}  degree {f.degree}, {pol}")
    for name, c in config.correspondences.items():
        print(f"correspondence {name} = {config.expressions[name]}")
        print(f"  degrees {_fmt(degree_sequence(c))}, total {total_degree(c)}, "
              f"Lefschetz number {lefschetz_number(c)}")
    return EXIT_OK


def cmd_degrees(args) -> int:
    config = load_config(args.config)
    c = config.correspondence(args.corr)
    n = config.variety.n
    print(f"correspondence: {c!r}")
    print(f"degrees deg_0..deg_{n}: {_fmt(degree_sequence(c))}")
    print(f"total degree: {total_degree(c)}")
    print(f"Lefschetz number: {lefschetz_number(c)}")
    ks = [args.k] if args.k is not None else []
    for k in ks:
        if not 0 <= k <= n:
            raise InputError(f"--k must be in [0, {n}]")
        est = lambda_growth(c, k, args.m_max, args.tol)
        head = ", ".join(str(d) for d in est.sequence[:8])
        print(f"deg_{k}(c^m), m = 1..: {head}, ...")
        if est.recurrence is not None:
            print(f"  minimal recurrence: {est.recurrence.characteristic_polynomial().as_expr()}")
        print(f"  growth rate λ_{k}: {_interval(est.dominant_modulus)}")
    return EXIT_OK


def cmd_spectra(args) -> int:
    config = load_config(args.config)
    c = config.correspondence(args.corr)
    action = graded_action(c)
    tol = args.tol
    print(f"correspondence: {c!r}")
    for i in range(len(action)):
        mp = min_poly(action[i])
        print(f"H^{i}: χ_{i} = {_interval(chi(action, i, tol))}, "
              f"semisimple = {is_semisimple(action[i])}")
        if args.verbose:
            print(f"  char poly: {char_poly(action[i]).as_expr()}")
            print(f"  min poly:  {mp.as_expr()}")
    for k in range(config.variety.n + 1):
        num = lambda_numerical(c, k, tol)
        extra = f"  saturation: {list(num.saturation_events)}" if num.saturation_events else ""
        print(f"λ_{k} on N^{k} (dim {num.lattice_dimension}): {_interval(num.value)}{extra}")
    return EXIT_OK


def _write(data: bytes, out: str | None):
    if out in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(out, "wb") as fh:
            fh.write(data)


def cmd_check(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        text = fh.read()
    config = load_config(args.config)
    params = SuiteParams(
        samples=args.samples, entry_bound=args.entry_bound, word_len=args.word_len,
        terms=args.terms, coeff_set=args.coeff_set, m_max=args.m_max, tol=args.tol,
        rel_tol=args.rel_tol, workers=args.workers,
    )
    report = run_suite(config, args.suite, args.seed, params, config_text=text)
    _write(emit(report, args.format), args.out)
    s = report["summary"]
    print(f"{args.suite}: {s['records']} records, verdicts {s['verdicts']}, "
          f"unexpected {s['unexpected']}", file=sys.stderr)
    return exit_code(report)


def cmd_report(args) -> int:
    if args.input in (None, "-"):
        raw = sys.stdin.read()
    else:
        with open(args.input, encoding="utf-8") as fh:
            raw = fh.read()
    try:
        report = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"report is not valid JSON: {exc}") from None
    try:
        validate(report)
    except Exception as exc:  # jsonschema.ValidationError
        raise InputError(f"report does not match the schema: {getattr(exc, 'message', exc)}") from None
    _write(emit(report, args.format), args.out)
    return exit_code(report)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abeldyn", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log saturation and precision events")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("describe", help="summarise a config")
    p.add_argument("config")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("degrees", help="degree sequence and growth of a correspondence")
    p.add_argument("config")
    p.add_argument("corr", help="a configured name or an inline expression")
    p.add_argument("--k", type=int, default=None, help="also report deg_k(c^m) growth")
    p.add_argument("--m-max", type=int, default=40)
    p.add_argument("--tol", type=_fraction, default=Fraction(1, 10**9))
    p.set_defaults(func=cmd_degrees)

    p = sub.add_parser("spectra", help="certified χ_i and λ_k of a correspondence")
    p.add_argument("config")
    p.add_argument("corr")
    p.add_argument("--tol", type=_fraction, default=Fraction(1, 10**9))
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("check", help="run a seeded stress suite")
    p.add_argument("config")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--entry-bound", type=int, default=3)
    p.add_argument("--word-len", type=int, default=2)
    p.add_argument("--terms", type=int, default=2)
    p.add_argument("--coeff-set", type=_coeffs, default=(Fraction(1), Fraction(2), Fraction(1, 2)),
                   help="comma-separated positive rationals, e.g. 1,2,1/2")
    p.add_argument("--m-max", type=int, default=40)
    p.add_argument("--tol", type=_fraction, default=Fraction(1, 10**9))
    p.add_argument("--rel-tol", type=_fraction, default=Fraction(1, 10**6))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("report", help="re-emit a JSON report as json or csv")
    p.add_argument("--input", default=None, help="JSON report path (default stdin)")
    p.add_argument("--format", choices=("json", "csv"), required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PrecisionError as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (InputError, RecurrenceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
