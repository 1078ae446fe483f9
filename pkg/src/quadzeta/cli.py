"""Command-line front end: ``quadzeta {char,exact,eval,table,verify}``.

Every command builds a report made of a config block, data rows and check
rows, then renders it as text, CSV or JSON.  All numbers leave this module as
strings so no precision is lost, and every numeric value is paired with an
error bound.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .bernoulli import bernoulli, gen_bernoulli
from .dyadic import (
    QRepresentation,
    error_table,
    factorization_residuals,
    fe_residual,
    log_q_bound,
    log_q_prime_sum,
    p_series,
    q_analytic,
    q_exact_even,
    required_digits,
)
from .errors import DomainError, ParityError, PrecisionInsufficient, QuadZetaError
from .euler import dedekind_zeta, p_product
from .lfunc import dirichlet_l, l_even_exact, zeta_dyadic_bounds, zeta_even_exact, zeta_real
from .numkernel import PrecReal, working
from .quadchar import character, gauss_sum

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_PRECISION = 3

DEFAULT_DIGITS = 50
DEFAULT_TERMS = 12
DEFAULT_PRIME_LIMIT = 10**5
DEFAULT_VERIFY_SIGMAS = ("1.5", "2", "3", "3.14159")
TABLE_COLUMNS = ("N", "error_exponent", "error_decimal", "tail_bound_exponent")


@dataclass
class Report:
    config: dict[str, str]
    rows: list[dict[str, str]] = field(default_factory=list)
    checks: list[dict[str, str]] = field(default_factory=list)
    columns: tuple[str, ...] | None = None

    @property
    def failed(self) -> bool:
        return any(c["status"] == "FAIL" for c in self.checks)


def fmt(x, digits: int = 17) -> str:
    """Decimal string with `digits` significant digits, e.g. 1.2345e-620."""
    if isinstance(x, PrecReal):
        digits = min(digits, x.digits)
        x = x.value
    return mpmath.nstr(x, digits, strip_zeros=False, min_fixed=-4, max_fixed=6)


def full(x: PrecReal) -> str:
    return mpmath.nstr(x.value, x.digits, strip_zeros=False)


def rounding_bound(x: PrecReal):
    with working(x.digits):
        return abs(x.value) * mpmath.mpf(10) ** (1 - x.digits)


# --- commands ---------------------------------------------------------------


def cmd_char(args) -> Report:
    c = character(args.discriminant)
    D = args.digits
    re, im = gauss_sum(c, D)
    rep = Report(
        {"command": "char", "discriminant": str(c.delta), "digits": str(D)},
        columns=("quantity", "value", "error_bound"),
    )
    rep.rows.append({"quantity": "modulus", "value": str(c.modulus), "error_bound": "0"})
    rep.rows.append({"quantity": "parity", "value": "even" if c.parity == 0 else "odd", "error_bound": "0"})
    values = ",".join(str(c(n)) for n in range(1, 2 * c.modulus + 1))
    rep.rows.append({"quantity": f"chi(1..{2 * c.modulus})", "value": values, "error_bound": "0"})
    bound = fmt(mpmath.mpf(10) ** (5 - D) * mpmath.sqrt(c.modulus), 3)
    rep.rows.append({"quantity": "gauss_sum.re", "value": full(re), "error_bound": bound})
    rep.rows.append({"quantity": "gauss_sum.im", "value": full(im), "error_bound": bound})
    return rep


def _exact_row(name: str, value, digits: int) -> dict[str, str]:
    if isinstance(value, Fraction):
        return {"quantity": name, "exact": str(value), "decimal": fmt(mpmath.mpf(value.numerator) / value.denominator, digits), "error_bound": "0"}
    rendered = value.render(digits)
    return {
        "quantity": name,
        "exact": str(value),
        "decimal": full(rendered),
        "error_bound": fmt(rounding_bound(rendered), 3),
    }


def cmd_exact(args) -> Report:
    c = character(args.discriminant)
    n = args.n
    if n is None:
        raise DomainError("exact needs -n")
    if c.parity != 0 or n < 2 or n % 2:
        raise ParityError("exact values need delta > 0 and an even n >= 2")
    D = args.digits
    sign_fix = not args.no_sign_fix
    rep = Report(
        {"command": "exact", "discriminant": str(c.delta), "n": str(n), "digits": str(D), "sign_fix": str(sign_fix).lower()},
        columns=("quantity", "exact", "decimal", "error_bound"),
    )
    with working(D):
        rep.rows.append(_exact_row(f"B_{n}", bernoulli(n), D))
        rep.rows.append(_exact_row(f"B_{n},chi", gen_bernoulli(c, n)[n], D))
    rep.rows.append(_exact_row(f"zeta({n})", zeta_even_exact(n), D))
    rep.rows.append(_exact_row(f"L({n},chi)", l_even_exact(c, n), D))
    rep.rows.append(_exact_row(f"q1({n})", q_exact_even(QRepresentation(1, c), n, sign_fix), D))
    rep.rows.append(_exact_row(f"q2({n})", q_exact_even(QRepresentation(2, c), n), D))
    return rep


def cmd_eval(args) -> Report:
    c = character(args.discriminant)
    D, N = args.digits, args.terms
    sigma = args.sigma[0] if args.sigma else "2"
    rep = Report(
        {"command": "eval", "discriminant": str(c.delta), "fn": args.fn, "sigma": sigma, "digits": str(D), "terms": str(N)},
        columns=("fn", "value", "error_bound", "terms", "paths"),
    )
    if args.fn in ("p1", "p2"):
        r = p_series(QRepresentation(int(args.fn[1]), c), sigma, N, D)
        with working(D):
            bound = abs(r.value.value) * mpmath.expm1(r.tail_bound.value) + rounding_bound(r.value)
        rep.rows.append(
            {"fn": args.fn, "value": full(r.value), "error_bound": fmt(bound, 3), "terms": str(N), "paths": " ".join(r.paths)}
        )
        return rep
    if args.fn in ("q1", "q2"):
        v = q_analytic(QRepresentation(int(args.fn[1]), c), sigma, D)
        path = "analytic"
    else:
        v = dedekind_zeta(c, sigma, D)
        path = "zeta*L"
    rep.rows.append({"fn": args.fn, "value": full(v), "error_bound": fmt(rounding_bound(v) * 10, 3), "terms": "-", "paths": path})
    return rep


def cmd_table(args) -> Report:
    c = character(args.discriminant)
    if args.fn not in ("p1", "p2"):
        raise DomainError("table is available for p1 and p2 only")
    which = int(args.fn[1])
    q = QRepresentation(which, c)
    sigma = args.sigma[0] if args.sigma else "2"
    n_max = args.terms
    D = args.digits
    need = required_digits(q, sigma, n_max)
    if D < need:
        print(f"notice: raising digits from {D} to {need} to resolve row {n_max}", file=sys.stderr)
        D = need
    try:
        rows = error_table(q, sigma, n_max, D)
    except PrecisionInsufficient:
        D = 2 * D
        print(f"notice: retrying with {D} digits", file=sys.stderr)
        rows = error_table(q, sigma, n_max, D)
    rep = Report(
        {"command": "table", "discriminant": str(c.delta), "fn": args.fn, "sigma": sigma, "digits": str(D), "terms": str(n_max)},
        columns=TABLE_COLUMNS,
    )
    for r in rows:
        rep.rows.append(
            {
                "N": str(r.terms),
                "error_exponent": str(r.error_exponent),
                "error_decimal": fmt(r.error),
                "tail_bound_exponent": str(r.tail_bound_exponent),
            }
        )
    return rep


def _check(rep: Report, name: str, ok: bool, value, bound) -> None:
    with mpmath.workdps(20):
        margin = bound - value
    rep.checks.append(
        {
            "check": name,
            "status": "PASS" if ok else "FAIL",
            "value": fmt(value, 6),
            "bound": fmt(bound, 6),
            "margin": fmt(margin, 6),
        }
    )


def _verify_sigma(rep: Report, c, sigma: str, D: int, N: int, P: int) -> None:
    floor = mpmath.mpf(10) ** (5 - D)
    lo, hi = zeta_dyadic_bounds(sigma, D)
    z = zeta_real(sigma, D)
    with working(D):
        gap = min(z.value - lo.value, hi.value - z.value)
    _check(rep, f"zeta bracket s={sigma}", lo < z < hi, -gap, mpmath.mpf(0))

    reps = [QRepresentation(1, c), QRepresentation(2, c)]
    series = {}
    for q in reps:
        series[q.which, 1] = p_series(q, sigma, N, D)
        series[q.which, 2] = p_series(q, mpmath.mpf(sigma) * 2, N, D)

    if mpmath.mpf(sigma) >= 2:
        bound = log_q_bound(sigma, D)
        for q in reps:
            v = q_analytic(q, sigma, D)
            with working(D):
                lq = abs(mpmath.log(v.value))
            _check(rep, f"|log {q.name}| bound s={sigma}", lq <= bound.value, lq, bound.value)

    for q in reps:
        r = fe_residual(q, sigma, N, D)
        contract = 3 * (series[q.which, 1].tail_bound.value + series[q.which, 2].tail_bound.value) + floor
        _check(rep, f"functional equation {q.name} s={sigma}", r.value <= contract, r.value, contract)

    r_zeta, r_l = factorization_residuals(c, sigma, N, D)
    t1, t2, t2d = (series[1, 1].tail_bound.value, series[2, 1].tail_bound.value, series[2, 2].tail_bound.value)
    with working(D):
        cz = 3 * z.value * (t1 + t2) + floor * z.value
        cl = 3 * (t1 + t2 + t2d) + floor
    _check(rep, f"zeta = ram*p1*p2 s={sigma}", r_zeta.value <= cz, r_zeta.value, cz)
    _check(rep, f"L = p1*p2(2s)/p2 s={sigma}", r_l.value <= cl, r_l.value, cl)

    for q in reps:
        prod = p_product(c, q.which, sigma, P, D)
        s = series[q.which, 1]
        with working(D):
            gap = abs(mpmath.log(prod.value.value) - s.log_value.value)
            allowed = prod.tail_bound.value + s.tail_bound.value + floor
        _check(rep, f"Euler product oracle p{q.which} s={sigma} P={P}", gap <= allowed, gap, allowed)


def _verify_exact(rep: Report, c, D: int, P: int, sign_fix: bool) -> None:
    tol = mpmath.mpf(10) ** (3 - D)
    for n in (2, 4, 8):
        for which in (1, 2):
            q = QRepresentation(which, c)
            exact = q_exact_even(q, n, sign_fix if which == 1 else True).render(D)
            analytic = q_analytic(q, n, D)
            with working(D):
                gap = abs(exact.value - analytic.value)
            _check(rep, f"{q.name}({n}) exact vs analytic", gap <= tol, gap, tol)
            value, tail = log_q_prime_sum(q, n, D, P)
            with working(D):
                lq = mpmath.log(analytic.value)
                gap = abs(lq - value.value)
                allowed = tail.value + tol
            _check(rep, f"{q.name}({n}) prime sum P={P} vs analytic", gap <= allowed, gap, allowed)
        lv = l_even_exact(c, n).render(D)
        num = dirichlet_l(c, n, D)
        with working(D):
            gap = abs(lv.value - num.value)
        _check(rep, f"L({n},chi) exact vs numeric", gap <= tol, gap, tol)


def cmd_verify(args) -> Report:
    c = character(args.discriminant)
    D, N, P = args.digits, args.terms, args.prime_limit
    sigmas = args.sigma or list(DEFAULT_VERIFY_SIGMAS)
    for s in sigmas:
        if mpmath.mpf(s) <= 1:
            raise DomainError(f"verify needs sigma > 1, got {s}")
    sign_fix = not args.no_sign_fix
    rep = Report(
        {
            "command": "verify",
            "discriminant": str(c.delta),
            "sigma": ",".join(sigmas),
            "digits": str(D),
            "terms": str(N),
            "prime_limit": str(P),
            "sign_fix": str(sign_fix).lower(),
        }
    )
    for s in sigmas:
        _verify_sigma(rep, c, s, D, N, P)
    if c.parity == 0:
        _verify_exact(rep, c, D, P, sign_fix)
    return rep


# --- output -----------------------------------------------------------------


def render(rep: Report, form: str) -> str:
    if form == "json":
        return json.dumps({"config": rep.config, "rows": rep.rows, "checks": rep.checks}, indent=2) + "\n"
    if form == "csv":
        buf = io.StringIO()
        records = rep.rows if rep.rows else rep.checks
        if records:
            cols = list(rep.columns) if rep.rows and rep.columns else list(records[0])
            w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
            w.writeheader()
            w.writerows(records)
        return buf.getvalue()
    lines = ["  ".join(f"{k}={v}" for k, v in rep.config.items())]
    if rep.rows:
        cols = list(rep.columns or rep.rows[0])
        widths = [max(len(col), *(len(r[col]) for r in rep.rows)) for col in cols]
        widths = [min(w, 60) for w in widths]
        lines.append("  ".join(col.ljust(w) for col, w in zip(cols, widths)))
        for r in rep.rows:
            lines.append("  ".join(r[col].ljust(w) for col, w in zip(cols, widths)).rstrip())
    for chk in rep.checks:
        lines.append(f"{chk['status']}  {chk['check']}: value={chk['value']} bound={chk['bound']} margin={chk['margin']}")
    if rep.checks:
        n_fail = sum(c["status"] == "FAIL" for c in rep.checks)
        lines.append(f"{len(rep.checks) - n_fail}/{len(rep.checks)} checks passed")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-d", "--discriminant", type=int, required=True, help="fundamental discriminant")
    common.add_argument("-s", "--sigma", action="append", help="real argument > 1 (repeatable for verify)")
    common.add_argument("-n", type=int, help="even integer for exact values")
    common.add_argument("-N", "--terms", type=int, default=DEFAULT_TERMS, help="series terms / table rows")
    common.add_argument("-D", "--digits", type=int, default=DEFAULT_DIGITS, help="decimal digits")
    common.add_argument("-P", "--prime-limit", type=int, default=DEFAULT_PRIME_LIMIT, help="prime bound for products")
    common.add_argument("--fn", choices=("p1", "p2", "q1", "q2", "zetaK"), default="p1")
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--no-sign-fix", action="store_true", help="use the uncorrected q1 closed form")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="quadzeta", description="Partial Euler products of quadratic Dedekind zeta functions.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, text in (
        ("char", cmd_char, "character table and Gauss sum"),
        ("exact", cmd_exact, "exact Bernoulli values at an even integer"),
        ("eval", cmd_eval, "evaluate p1, p2, q1, q2 or zeta_K with an error bound"),
        ("table", cmd_table, "convergence table of the dyadic series"),
        ("verify", cmd_verify, "run the identity checks"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.digits < 1 or args.terms < 1 or args.prime_limit < 2:
        print("error: digits and terms must be positive and the prime limit at least 2", file=sys.stderr)
        return EXIT_USAGE
    try:
        rep = args.func(args)
    except PrecisionInsufficient as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadZetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    sys.stdout.write(render(rep, args.format))
    return EXIT_CHECK_FAILED if rep.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
