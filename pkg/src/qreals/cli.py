"""Command-line interface: ``qreals <subcommand> ...``.

Every subcommand accepts ``--json``.  Floats are printed with
``QREALS_DIGITS`` significant decimals (default 10); ``--digits`` overrides.
Usage errors exit with status 2, computation errors with status 1.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from fractions import Fraction

from .cf import ContinuedFraction, Kind, format_cf, hj_cf_expand, hj_to_regular, parse_cf, regular_cf_expand, regular_to_hj
from .errors import QRealsError
from .exactalg import format_laurent, format_poly, format_rational, parse_poly
from .families import Family, family_poly, triangle_csv, triangle_flat, triangle_rows
from .qdeform import q_rational_recursive, q_real_series
from .radius import (
    R_SQRT2,
    R_STAR,
    genthm_check,
    radius_by_depth,
    radius_exact,
    radius_numeric,
    radius_rational,
)
from .roots import annulus_check, find_roots, tightness_trend
from .scan import ScanConfig, conjecture_scan

log = logging.getLogger("qreals")

DEFAULT_BOUNDS = {Family.FIBONACCI: R_STAR, Family.PELL: R_SQRT2}


def _digits() -> int:
    try:
        return max(1, int(os.environ.get("QREALS_DIGITS", "10")))
    except ValueError:
        return 10


# ---------------------------------------------------------------------------
# argument types (raise ArgumentTypeError so bad input is a usage error)


def _fraction_arg(text: str) -> Fraction:
    try:
        x = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational r/s, got {text!r}") from None
    return x


def _cf_arg(text: str) -> ContinuedFraction:
    try:
        return parse_cf(text)
    except (QRealsError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _family_arg(text: str) -> Family:
    try:
        return Family.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _poly_arg(text: str):
    try:
        return parse_poly(text)
    except (QRealsError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _nonnegative(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


# ---------------------------------------------------------------------------
# output helpers


class Output:
    def __init__(self, args):
        self.json = args.json
        self.digits = args.digits or _digits()

    def num(self, x: float | None) -> str:
        if x is None:
            return "-"
        if math.isinf(x):
            return "inf"
        return f"{x:.{self.digits}f}"

    def emit(self, payload: dict, lines: list[str]):
        if self.json:
            print(json.dumps(payload, indent=2, default=str))
        else:
            for line in lines:
                print(line)


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


# ---------------------------------------------------------------------------
# subcommands


def cmd_qrat(args, out: Output) -> int:
    x = args.value
    qr = q_rational_recursive(x.numerator, x.denominator)
    out.emit(qr.to_json(), [format_rational(qr.value)])
    return 0


def cmd_series(args, out: Output) -> int:
    qs = q_real_series(args.cf, args.order, max_depth=args.max_depth)
    s = qs.series
    text = format_laurent(s.low, list(s.coeffs))
    if args.bfile:
        start = qs.low
        with open(args.bfile, "w") as fh:
            for k, c in enumerate(qs.coefficients(), start=start):
                fh.write(f"{k} {c}\n")
    out.emit(qs.to_json(), [text])
    return 0


def cmd_cf(args, out: Output) -> int:
    src = args.value
    if isinstance(src, Fraction):
        r, s = src.numerator, src.denominator
        if r <= 0 and args.to == "hj":
            raise QRealsError("Hirzebruch-Jung expansions need a positive rational")
        result = hj_cf_expand(r, s) if args.to == "hj" else regular_cf_expand(r, s)
    elif args.to == "hj":
        result = src if src.kind is Kind.HJ else regular_to_hj(src)
    else:
        result = src if src.kind is Kind.REGULAR else hj_to_regular(src)
    out.emit(result.to_json(), [format_cf(result)])
    return 0


def _cf_or_fraction(text: str):
    if "[" in text:
        return _cf_arg(text)
    return _fraction_arg(text)


def cmd_family(args, out: Output) -> int:
    fam = args.family.tilde if args.tilde else args.family
    if args.triangle:
        rows = triangle_rows(fam, args.triangle)
        if args.csv:
            with open(args.csv, "w") as fh:
                fh.write(triangle_csv(rows))
        payload = {"family": fam.value, "rows": rows, "flat": triangle_flat(rows)}
        lines = [" ".join(map(str, r)) for r in rows]
        out.emit(payload, lines)
        return 0
    if args.n is None:
        raise QRealsError("give --n or --triangle")
    p = family_poly(fam, args.n)
    payload = {"family": fam.value, "n": args.n, "coeffs": list(p.coeffs), "text": format_poly(p)}
    out.emit(payload, [format_poly(p)])
    return 0


def _roots_input(args):
    if args.poly is not None:
        return args.poly, "polynomial"
    if args.family is None or args.n is None:
        raise QRealsError("give --poly or both --family and --n")
    return family_poly(args.family, args.n), f"{args.family.value}{args.n}"


def cmd_roots(args, out: Output) -> int:
    p, label = _roots_input(args)
    if p.degree < 1:
        raise QRealsError("polynomial has no roots (degree < 1)")
    rs = find_roots(p, args.tol)
    rows = rs.to_rows()
    if args.csv:
        _write_csv(args.csv, ["re", "im", "modulus"], rows)
    if args.plot:
        from .plotting import plot_roots

        circles = [(R_SQRT2, "R_sqrt2"), (1 / R_SQRT2, "1/R_sqrt2")]
        if args.family is not None and args.family.base is Family.FIBONACCI:
            circles = [(R_STAR, "R*"), (1 / R_STAR, "1/R*")]
        plot_roots(rs.roots, args.plot, f"roots of {label}", circles)
    lines = [
        f"degree {p.degree}",
        f"min_modulus {out.num(rs.min_modulus)}",
        f"max_modulus {out.num(rs.max_modulus)}",
        f"max_residual {rs.max_residual:.2e}",
    ]
    if args.list:
        lines += ["re,im,modulus"] + [",".join(out.num(v) for v in row) for row in rows]
    out.emit({"label": label, **rs.to_json()}, lines)
    return 0


def cmd_annulus(args, out: Output) -> int:
    fam = args.family.base
    inner = args.inner if args.inner is not None else DEFAULT_BOUNDS[fam]
    outer = args.outer if args.outer is not None else 1 / inner
    reports = annulus_check(fam, args.max, inner, outer, args.tol)
    header = ["label", "n", "degree", "min_modulus", "max_modulus", "pass"]
    rows = [[r.label, r.n, r.degree, out.num(r.min_modulus), out.num(r.max_modulus), r.passed] for r in reports]
    if args.csv:
        _write_csv(args.csv, header, rows)
    if args.plot:
        from .plotting import plot_annulus

        plot_annulus(reports, args.plot, f"{fam.value}: root moduli, n <= {args.max}")
    passed = all(r.passed for r in reports)
    trend = tightness_trend([r for r in reports if "~" not in r.label])
    payload = {
        "family": fam.value,
        "inner_bound": inner,
        "outer_bound": outer,
        "all_pass": passed,
        "reports": [r.to_json() for r in reports],
        "tightness": [{"label": lbl, "min_modulus": m, "gap": g} for lbl, m, g in trend],
    }
    lines = [",".join(header)] + [",".join(map(str, row)) for row in rows]
    lines.append(f"all_pass {passed}  bounds ({out.num(inner)}, {out.num(outer)})")
    out.emit(payload, lines)
    return 0


def cmd_radius(args, out: Output) -> int:
    cf = args.cf
    if args.plot and not cf.is_finite:
        from .plotting import plot_radius_convergence

        depths = sorted({d for d in (16, 24, 32, 48, 64, 96, 128, 192, 256, 384) if d <= args.depth} | {args.depth})
        rows = radius_by_depth(cf, depths)
        exact = None if args.numeric else radius_exact(cf, crosscheck=False).value
        plot_radius_convergence(rows, args.plot, exact, f"radius estimates for {format_cf(cf)}")
    if cf.is_finite:
        rep = radius_rational(cf)
    elif args.numeric:
        rep = radius_numeric(q_real_series(cf, args.depth))
    else:
        rep = radius_exact(cf, crosscheck=args.crosscheck, numeric_order=args.depth)
    lines = [out.num(rep.value), f"method {rep.method.value}"]
    if rep.certificate is not None:
        c = rep.certificate
        lines.append(f"certificate {format_poly(c.factor, descending=True)}")
        lines.append(f"root {out.num(c.root.real)}{'+' if c.root.imag >= 0 else '-'}{out.num(abs(c.root.imag))}i ({c.kind})")
    if rep.estimates:
        e = rep.estimates
        lines.append(
            f"numeric root-test {out.num(e.get('R_root'))} ratio-test {out.num(e.get('R_ratio'))} "
            f"tail-max {out.num(e.get('R_limsup'))} from {rep.coefficient_count} coefficients"
        )
    if rep.numeric_consistent is not None:
        lines.append(f"numeric_consistent {rep.numeric_consistent}")
    payload = rep.to_json()
    payload["cf"] = format_cf(cf)
    if payload["certificate"]:
        payload["certificate"]["text"] = format_poly(rep.certificate.factor, descending=True)
    out.emit(payload, lines)
    return 0


def cmd_genthm(args, out: Output) -> int:
    rep = genthm_check(args.cf, args.n)
    lines = [
        f"hj {rep.cf}",
        f"guaranteed {rep.guaranteed}",
        f"N {rep.threshold_index if rep.threshold_index is not None else '-'}",
        f"empirical_pass {rep.empirical_pass} (denominators up to n={max((c.n for c in rep.checks), default=0)}, |q| <= {out.num(rep.radius)})",
    ]
    bad = [c for c in rep.checks if not c.root_free]
    lines += [f"  S_{c.n}: {c.zeros_inside} zeros inside" for c in bad]
    out.emit(rep.to_json(), lines)
    return 0


def cmd_scan(args, out: Output) -> int:
    cfg = ScanConfig(
        samples=args.samples,
        seed=args.seed,
        workers=args.workers,
        max_entry=args.max_entry,
        max_period=args.max_period,
        finite_fraction=args.finite_fraction,
    )
    rep = conjecture_scan(cfg)
    payload = rep.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
    if args.plot:
        from .plotting import plot_scan

        plot_scan([r.radius for r in rep.results], args.plot, f"{cfg.samples} samples, seed {cfg.seed}")
    m = rep.minimum
    lines = [
        f"samples {len(rep.results)} seed {cfg.seed}",
        f"violations {len(rep.violations)}",
        f"unconfirmed {len(rep.unconfirmed)}",
        f"errors {len(rep.errors)}",
        f"min_radius {out.num(m.radius) if m else '-'} at {m.cf if m else '-'}",
        f"equality_hits {len(rep.equality_hits)}",
        f"certificate_degrees {rep.degree_histogram()}",
    ]
    lines += [f"orbit {p['word']}: {p['cf']} radius {out.num(p['radius'])}" for p in rep.probe]
    out.emit(payload, lines)
    return 0


def cmd_verify(args, out: Output) -> int:
    from .golden import verify_suite

    checks = verify_suite(quick=args.quick)
    ok = all(c.ok for c in checks)
    lines = [f"{c.status.upper():8s} {c.name}: {c.detail}" for c in checks]
    lines.append(f"{sum(c.status == 'pass' for c in checks)} passed, "
                 f"{sum(c.status == 'erratum' for c in checks)} errata, {sum(c.status == 'fail' for c in checks)} failed")
    out.emit({"suite": args.suite, "quick": args.quick, "ok": ok, "checks": [c.to_json() for c in checks]}, lines)
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("--digits", type=_positive, default=None, help="decimals for floats (default $QREALS_DIGITS or 10)")

    parser = argparse.ArgumentParser(prog="qreals", description="q-deformed rationals and reals")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qrat", parents=[common], help="print [r/s]_q")
    p.add_argument("value", type=_fraction_arg, help="r/s (use -- before negative values)")
    p.set_defaults(func=cmd_qrat)

    p = sub.add_parser("series", parents=[common], help="Taylor coefficients of [x]_q")
    p.add_argument("--cf", type=_cf_arg, required=True, help='continued fraction, e.g. "[1;(1)]" or "hj:[2;(4)]"')
    p.add_argument("--order", type=_positive, default=20)
    p.add_argument("--max-depth", type=_positive, default=400)
    p.add_argument("--bfile", help="also write 'n a(n)' lines to this file")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("cf", parents=[common], help="continued fraction expansion or conversion")
    p.add_argument("--to", choices=("hj", "regular"), required=True)
    p.add_argument("value", type=_cf_or_fraction, help="r/s or a continued fraction")
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("family", parents=[common], help="Fibonacci and Pell polynomials")
    p.add_argument("family", type=_family_arg, help="fib, pell, fib~ or pell~")
    p.add_argument("--n", type=_nonnegative)
    p.add_argument("--tilde", action="store_true")
    p.add_argument("--triangle", type=_positive, metavar="ROWS")
    p.add_argument("--csv", help="write triangle rows to this CSV file")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("roots", parents=[common], help="complex roots of a polynomial")
    p.add_argument("--family", type=_family_arg)
    p.add_argument("--n", type=_nonnegative)
    p.add_argument("--poly", type=_poly_arg, help='e.g. "1+3q+q^2"')
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--csv", help="write re,im,modulus rows to this file")
    p.add_argument("--plot", help="write a PNG of the roots to this file")
    p.add_argument("--list", action="store_true", help="print every root")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("annulus", parents=[common], help="root annulus of a family")
    p.add_argument("--family", type=_family_arg, required=True)
    p.add_argument("--max", type=_positive, required=True)
    p.add_argument("--inner", type=float)
    p.add_argument("--outer", type=float)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--csv")
    p.add_argument("--plot")
    p.set_defaults(func=cmd_annulus)

    p = sub.add_parser("radius", parents=[common], help="radius of convergence of [x]_q")
    p.add_argument("--cf", type=_cf_arg, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="discriminant method (default)")
    mode.add_argument("--numeric", action="store_true", help="coefficient tests only")
    p.add_argument("--depth", type=_positive, default=200, help="coefficients for numeric estimates")
    p.add_argument("--crosscheck", action="store_true", help="compare the exact value with numeric estimates")
    p.add_argument("--plot", help="write estimates against depth to this PNG")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("genthm", parents=[common], help="check the all-coefficients-at-least-four criterion")
    p.add_argument("--cf", type=_cf_arg, required=True)
    p.add_argument("--n", type=_positive, default=60, help="number of denominators to test")
    p.set_defaults(func=cmd_genthm)

    p = sub.add_parser("scan", parents=[common], help="seeded search for radii below R*")
    p.add_argument("--samples", type=_positive, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--max-entry", type=_positive, default=4)
    p.add_argument("--max-period", type=_positive, default=6)
    p.add_argument("--finite-fraction", type=float, default=0.0)
    p.add_argument("--out", help="write the full JSON report here")
    p.add_argument("--plot", help="write a histogram PNG here")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", parents=[common], help="run the reference checks")
    p.add_argument("--suite", choices=("paper",), default="paper")
    p.add_argument("--quick", action="store_true", help="smaller ranges")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args, Output(args))
    except (QRealsError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
