"""The dyadic series for the partial Euler products p_1 and p_2.

For a quadratic character chi, p_1 and p_2 are the Euler products over split
and inert primes.  They are the unique solutions of p(2s) / p(s)^2 = q(s) with
p -> 1, so

    log p(s) = -sum_{n >= 0} log q(2^n s) / 2^(n+1),

and since |log q(x)| <= 16 / (2^x - 2) the terms decay doubly exponentially.
q_1 and q_2 are available three ways: from zeta and L (``q_analytic``), as
exact Bernoulli closed forms at even integers (``q_exact_even``), and as a
prime sum (``log_q_prime_sum``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import mpmath
from mpmath import mpf

from .bernoulli import bernoulli, gen_bernoulli
from .errors import DomainError, InternalInconsistency, ParityError, PrecisionInsufficient
from .euler import Splitting, primes_of_class, ramified_factor
from .lfunc import LN10, ExactSpecialValue, _l_extra_digits, _l_mpf, _hurwitz_mpf, dirichlet_l, zeta_real
from .numkernel import Number, PrecReal, guard_digits, log10_abs, real, working
from .quadchar import QuadraticCharacter

# Largest prime bound the prime-sum evaluator may use for a single term.
PRIME_SUM_LIMIT = 10**5
# Largest even integer argument evaluated through the Bernoulli closed form.
EXACT_LIMIT = 64


@dataclass(frozen=True)
class QRepresentation:
    """q_1 (which=1, split primes) or q_2 (which=2, inert primes) of a character."""

    which: int
    character: QuadraticCharacter

    def __post_init__(self):
        if self.which not in (1, 2):
            raise ValueError("which must be 1 or 2")

    @property
    def kind(self) -> Splitting:
        return Splitting.SPLIT if self.which == 1 else Splitting.INERT

    @property
    def name(self) -> str:
        return f"q{self.which}"


def q1(c: QuadraticCharacter) -> QRepresentation:
    return QRepresentation(1, c)


def q2(c: QuadraticCharacter) -> QRepresentation:
    return QRepresentation(2, c)


@dataclass(frozen=True)
class TruncationResult:
    """exp of a partial sum of the dyadic series, with a bound on the omitted log."""

    value: PrecReal
    terms: int
    partial_terms: tuple[PrecReal, ...]
    tail_bound: PrecReal
    log_value: PrecReal
    paths: tuple[str, ...] = field(default=())


def _ramified_mpf(c: QuadraticCharacter, s: mpf, sign: int) -> mpf:
    prod = mpf(1)
    for p in c.disc.ramified_primes():
        prod *= 1 + sign * mpf(p) ** (-s)
    return prod


def _q_mpf(rep: QRepresentation, s: mpf, digits: int) -> mpf:
    # caller holds a working-precision context with room for `digits`
    c = rep.character
    extra = _l_extra_digits(c, float(s))
    with mpmath.workdps(digits + extra + guard_digits(c.modulus)):
        z = _hurwitz_mpf(s, Fraction(1), digits)
        lv = _l_mpf(c, s, digits + extra)
        if rep.which == 1:
            q = _hurwitz_mpf(2 * s, Fraction(1), digits) / (z * lv) * _ramified_mpf(c, s, 1)
        else:
            q = lv / z / _ramified_mpf(c, s, -1)
    return +q


def _check_range(rep: QRepresentation, q: mpf, s, digits: int) -> None:
    # q = 1 to working precision is fine: 1 - q can lie far below 10^-digits
    with mpmath.workdps(digits + 5):
        ok = 0 < q < 1 + mpf(10) ** (1 - digits)
    if not ok:
        raise InternalInconsistency(
            f"{rep.name}({mpmath.nstr(s, 8)}) = {mpmath.nstr(q, 12)} is outside (0, 1)"
        )


def q_analytic(rep: QRepresentation, sigma: Number, digits: int) -> PrecReal:
    """q_i(sigma) from zeta, L and the finite product over ramified primes."""
    s = real(sigma, digits)
    if s.value <= 1:
        raise DomainError("q is only defined here for sigma > 1")
    with working(digits):
        q = _q_mpf(rep, +s.value, digits)
    _check_range(rep, q, s.value, digits)
    return PrecReal(q, digits)


def q_exact_even(rep: QRepresentation, n: int, sign_fix: bool = True) -> ExactSpecialValue:
    """Closed form of q_i(n) for even n >= 2 and an even character.

    q_2(n) = sqrt(d)/d^n * B_{n,chi}/B_n * prod_{p|d} (1 - p^-n)^-1
    q_1(n) = -2 d^n/(C(2n,n) sqrt(d)) * B_{2n}/(B_{n,chi} B_n) * prod_{p|d} (1 + p^-n)

    The leading minus sign of q_1 comes from zeta(2n) carrying (-1)^(1+n);
    ``sign_fix=False`` drops it and returns a negative number.
    """
    c = rep.character
    if c.parity != 0:
        raise ParityError("closed forms need an even character (delta > 0)")
    if n < 2 or n % 2:
        raise ParityError("closed forms need an even n >= 2")
    d = c.modulus
    bn = bernoulli(n)
    bnchi = gen_bernoulli(c, n)[n]
    ram = c.disc.ramified_primes()
    if rep.which == 2:
        coeff = Fraction(1, d**n) * bnchi / bn
        for p in ram:
            coeff /= 1 - Fraction(1, p**n)
    else:
        coeff = Fraction(2 * d ** (n - 1), comb(2 * n, n)) * bernoulli(2 * n) / (bnchi * bn)
        for p in ram:
            coeff *= 1 + Fraction(1, p**n)
        if sign_fix:
            coeff = -coeff
    return ExactSpecialValue(coeff, 0, 1, c.disc)


def log_q_bound(sigma: Number, digits: int = 30) -> PrecReal:
    """|log q_i(sigma)| <= 16 / (2^sigma - 2) for sigma >= 2."""
    s = real(sigma, digits)
    if s.value < 2:
        raise DomainError("the log q bound needs sigma >= 2")
    with working(s.digits):
        return PrecReal(16 / (mpf(2) ** s.value - 2), s.digits)


def _prime_sum_mpf(rep: QRepresentation, s: mpf, prime_limit: int) -> tuple[mpf, mpf]:
    total = mpf(0)
    for p in primes_of_class(rep.character, rep.kind, prime_limit):
        total -= 2 * mpmath.atanh(mpf(p) ** (-s))
    tail = 4 * mpf(prime_limit) ** (1 - s) / (s - 1)
    return total, tail


def log_q_prime_sum(
    rep: QRepresentation, sigma: Number, digits: int, prime_limit: int
) -> tuple[PrecReal, PrecReal]:
    """sum over class primes p <= P of log((1 - p^-s)/(1 + p^-s)), and a tail bound."""
    s = real(sigma, digits)
    if s.value < 2:
        raise DomainError("the prime-sum evaluator needs sigma >= 2")
    with working(digits, prime_limit):
        total, tail = _prime_sum_mpf(rep, +s.value, max(int(prime_limit), 2))
        return PrecReal(total, digits), PrecReal(tail, digits)


def prime_limit_for(x: float, digits: int) -> int:
    """Smallest P with 4 P^(1-x)/(x-1) <= 10^-(digits + guard)."""
    need = (digits + guard_digits()) * LN10 + math.log(4 / (x - 1))
    log_p = need / (x - 1)
    if log_p > math.log(PRIME_SUM_LIMIT) + 1:
        return PRIME_SUM_LIMIT + 1
    return max(2, math.ceil(math.exp(log_p)))


def _exact_applies(rep: QRepresentation, x: mpf) -> bool:
    return (
        rep.character.parity == 0
        and mpmath.isint(x)
        and int(x) % 2 == 0
        and 2 <= int(x) <= EXACT_LIMIT
    )


@lru_cache(maxsize=4096)
def _log_q_term(rep: QRepresentation, x: mpf, digits: int, exact: bool) -> tuple[mpf, mpf, str]:
    """log q(x) with an absolute error bound and the evaluator used.

    Evaluators in order of preference: Bernoulli closed form (even integer x,
    even character), prime sum (when a prime bound <= PRIME_SUM_LIMIT meets the
    target), zeta/L quotient.
    """
    xf = float(x)
    floor = mpf(10) ** (-(digits + guard_digits() - 2))
    with working(digits):
        if exact and _exact_applies(rep, x):
            q = q_exact_even(rep, int(x)).render(digits + guard_digits()).value
            return mpmath.log(q), floor, "exact"
        if xf >= 2:
            limit = prime_limit_for(xf, digits)
            if limit <= PRIME_SUM_LIMIT:
                with working(digits, limit):
                    value, tail = _prime_sum_mpf(rep, x, limit)
                return +value, tail + floor, f"primes<={limit}"
        q = _q_mpf(rep, x, digits)
        _check_range(rep, q, x, digits)
        return mpmath.log(q), floor, "analytic"


def _majorant_tail(s: mpf, start: int, digits: int) -> mpf:
    """sum_{k >= start} 2^-(k+1) * 16 / (2^(2^k s) - 2)."""
    total = mpf(0)
    k = start
    while True:
        term = mpf(16) / (2 ** (k + 1) * (mpf(2) ** (mpf(2) ** k * s) - 2))
        total += term
        # later terms are at most the square of this one
        if term == 0 or term < total * mpf(10) ** (-digits):
            return total
        k += 1


def p_series(
    rep: QRepresentation, sigma: Number, terms: int, digits: int, exact: bool = True
) -> TruncationResult:
    """p_i(sigma) = exp(-sum_{n < terms} log q_i(2^n sigma) / 2^(n+1)), with tail bound.

    ``exact=False`` keeps terms off the Bernoulli closed form.
    """
    s = real(sigma, digits)
    if s.value <= 1:
        raise DomainError("p_series needs sigma > 1")
    if terms < 1:
        raise ValueError("at least one term is required")
    partial = []
    paths = []
    with working(digits, terms):
        total = mpf(0)
        err = mpf(0)
        for n in range(terms):
            x = mpf(2) ** n * s.value
            value, bound, path = _log_q_term(rep, x, digits, exact)
            weight = mpf(2) ** (-n - 1)
            partial.append(PrecReal(weight * value, digits))
            paths.append(path)
            total += weight * value
            err += weight * bound
        tail = _majorant_tail(s.value, terms, digits) + err
        return TruncationResult(
            value=PrecReal(mpmath.exp(-total), digits),
            terms=terms,
            partial_terms=tuple(partial),
            tail_bound=PrecReal(tail, digits),
            log_value=PrecReal(-total, digits),
            paths=tuple(paths),
        )


def fe_residual(rep: QRepresentation, sigma: Number, terms: int, digits: int) -> PrecReal:
    """|p(2 sigma) / p(sigma)^2 - q(sigma)| with both p values from the series."""
    s = real(sigma, digits)
    lhs_top = p_series(rep, 2 * s, terms, digits)
    lhs_bottom = p_series(rep, s, terms, digits)
    q = q_analytic(rep, s, digits)
    with working(digits):
        r = lhs_top.value.value / lhs_bottom.value.value**2 - q.value
        return PrecReal(abs(r), digits)


def factorization_residuals(
    c: QuadraticCharacter, sigma: Number, terms: int, digits: int
) -> tuple[PrecReal, PrecReal]:
    """Residuals of zeta = prod_{p|d}(1-p^-s)^-1 p_1 p_2 and L = p_1(s) p_2(2s) / p_2(s)."""
    s = real(sigma, digits)
    p1 = p_series(q1(c), s, terms, digits).value.value
    p2 = p_series(q2(c), s, terms, digits).value.value
    p2_double = p_series(q2(c), 2 * s, terms, digits).value.value
    z = zeta_real(s, digits).value
    lv = dirichlet_l(c, s, digits).value
    ram = ramified_factor(c, s, digits).value
    with working(digits):
        r_zeta = abs(z - ram * p1 * p2)
        r_l = abs(lv - p1 * p2_double / p2)
        return PrecReal(r_zeta, digits), PrecReal(r_l, digits)


def smallest_class_prime(rep: QRepresentation) -> int:
    limit = 1000
    while True:
        found = primes_of_class(rep.character, rep.kind, limit)
        if found:
            return found[0]
        limit *= 10


def required_digits(rep: QRepresentation, sigma: Number, n_max: int) -> int:
    """Digits needed to resolve the row-n_max error of ``error_table``.

    The omitted tail after n_max terms is dominated by 2^-(n_max+1) * 2 p0^-x
    at x = 2^n_max sigma, p0 the smallest prime of the class.
    """
    s = float(real(sigma, 20).value)
    p0 = smallest_class_prime(rep)
    x = 2.0**n_max * s
    exponent = -n_max * math.log10(2) - x * math.log10(p0)
    return max(30, math.ceil(-exponent) + 30)


@dataclass(frozen=True)
class ErrorRow:
    terms: int
    error: PrecReal
    error_exponent: int
    tail_bound: PrecReal

    @property
    def tail_bound_exponent(self) -> int:
        return math.floor(log10_abs(self.tail_bound))


def error_table(
    rep: QRepresentation, sigma: Number, n_max: int, digits: int, exact: bool = True
) -> list[ErrorRow]:
    """|p_ref - exp(partial sum of N terms)| for N = 1..n_max.

    The reference is the (n_max + 3)-term sum; its tail bound must sit well
    below the last error, and the last error well above working noise.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    s = real(sigma, digits)
    ref = p_series(rep, s, n_max + 3, digits, exact)
    rows = []
    with working(digits, n_max + 3):
        p_ref = ref.value.value
        acc = mpf(0)
        for n in range(n_max):
            acc += ref.partial_terms[n].value
            err = abs(p_ref - mpmath.exp(-acc))
            # tail bound of the N-term truncation, in absolute terms
            trunc = ref.tail_bound.value + sum(
                (abs(t.value) for t in ref.partial_terms[n + 1 :]), mpf(0)
            )
            rows.append(
                ErrorRow(
                    terms=n + 1,
                    error=PrecReal(err, digits),
                    error_exponent=math.floor(log10_abs(err)) if err else -(10**9),
                    tail_bound=PrecReal(p_ref * trunc * 2, digits),
                )
            )
        last = rows[-1].error.value
        ref_err = 2 * p_ref * ref.tail_bound.value
        noise = mpf(10) ** (5 - digits) * p_ref
        if last <= noise or ref_err * 1000 > last:
            raise PrecisionInsufficient(
                f"{digits} digits cannot resolve the N={n_max} error; "
                f"need about {required_digits(rep, s, n_max)}"
            )
    for a, b in zip(rows, rows[1:]):
        if not b.error < a.error:
            raise PrecisionInsufficient(f"errors not decreasing at N={b.terms}")
    return rows
