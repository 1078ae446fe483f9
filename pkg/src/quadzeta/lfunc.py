"""zeta(sigma), Hurwitz zeta and L(sigma, chi) on the real axis sigma > 1.

Numeric values come from Euler-Maclaurin summation with an explicit stopping
rule; exact values at even integers come from Bernoulli numbers.
"""

from __future__ import annotations

import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath
from mpmath import mpf

from .bernoulli import bernoulli, gen_bernoulli
from .errors import DomainError, ParityError
from .numkernel import Number, PrecReal, guard_digits, real, to_mpf, working
from .quadchar import Discriminant, QuadraticCharacter

log = logging.getLogger(__name__)

LN10 = math.log(10.0)
# Use plain partial sums when at most this many terms reach the target.
DIRECT_TERMS = 16


@dataclass(frozen=True)
class ExactSpecialValue:
    """The number coeff * pi**pi_power * sqrt(d)**sqrt_disc."""

    coeff: Fraction
    pi_power: int
    sqrt_disc: int
    disc: Discriminant | None = None

    def __post_init__(self):
        if self.sqrt_disc not in (0, 1):
            raise ValueError("sqrt_disc must be 0 or 1")
        if self.sqrt_disc and self.disc is None:
            raise ValueError("sqrt_disc=1 needs a discriminant")

    def render(self, digits: int) -> PrecReal:
        with working(digits):
            v = to_mpf(self.coeff)
            if self.pi_power:
                v *= mpmath.pi**self.pi_power
            if self.sqrt_disc:
                v *= mpmath.sqrt(self.disc.modulus)
            return PrecReal(v, digits)

    def __str__(self) -> str:
        parts = [str(self.coeff)]
        if self.pi_power == 1:
            parts.append("pi")
        elif self.pi_power:
            parts.append(f"pi^{self.pi_power}")
        if self.sqrt_disc:
            parts.append(f"sqrt({self.disc.modulus})")
        return "*".join(parts)


def _sigma(sigma: Number, digits: int) -> PrecReal:
    s = real(sigma, digits)
    if s.value <= 1:
        raise DomainError(f"sigma = {s} is outside the half-plane sigma > 1")
    return s


def _direct_terms(s: float, a: float, digits: int) -> int | None:
    """Smallest K <= DIRECT_TERMS with sum_{m>=K} (m+a)^-s below 10^-digits relative to a^-s."""
    target = -(digits + 5) * LN10
    for k in range(1, DIRECT_TERMS + 1):
        x = k + a
        tail = -s * math.log(x) + math.log1p(x / (s - 1))
        if tail + s * math.log(a) < target:
            return k
    return None


_bern_lock = threading.Lock()
_bern_memo: dict[tuple[int, int], mpf] = {}


def _bernoulli_mpf(n: int) -> mpf:
    """B_n at the current binary precision, memoized per (precision, n)."""
    key = (mpmath.mp.prec, n)
    v = _bern_memo.get(key)
    if v is None:
        v = mpmath.bernoulli(n)
        with _bern_lock:
            if len(_bern_memo) > 200_000:
                _bern_memo.clear()
            _bern_memo[key] = v
    return v


def _em_cutoff(s: float, digits: int) -> int:
    return max(20, math.ceil(digits * LN10 / s) + 10)


def _em_order(s: float, x: float, log_target: float, j_max: int) -> int | None:
    """Estimated correction order J at cutoff x, or None if the terms never get small enough."""
    lg_s = math.lgamma(s)
    log_2pi = math.log(2 * math.pi)
    log_x = math.log(x)
    prev = math.inf
    for j in range(1, j_max + 1):
        # |B_2j|/(2j)! <= 4 (2 pi)^-2j
        lt = math.log(4) - 2 * j * log_2pi + math.lgamma(s + 2 * j - 1) - lg_s - (s + 2 * j - 1) * log_x
        if lt < log_target:
            return j
        if lt > prev:
            return None
        prev = lt
    return None


def _em_plan(s: float, a: float, digits: int) -> int:
    """Cutoff M for zeta(s, a): the default M0, or a larger M when that lowers the estimated cost."""
    m0 = _em_cutoff(s, digits)
    log_target = -(digits + guard_digits()) * LN10 - s * math.log(a)
    # cost of one main term (a power) against one correction term (a few products)
    w_main = 2 + math.log2(s) if float(s).is_integer() else 12.0
    best_m, best_cost = None, math.inf
    m = m0
    while m <= 64 * m0:
        j = _em_order(s, m + a, log_target, 4 * m + int(s) + 50)
        if j is not None:
            cost = w_main * m + 4 * j
            if cost < best_cost:
                best_m, best_cost = m, cost
        m = int(m * 1.25) + 1
    return best_m if best_m is not None else m0


def _hurwitz_mpf(s: mpf, a: Fraction, digits: int) -> mpf:
    """Euler-Maclaurin value of zeta(s, a); caller sets the working precision."""
    sf = float(s)
    af = a.numerator / a.denominator
    num, den = a.numerator, a.denominator

    k = _direct_terms(sf, af, digits)
    if k is not None:
        total = mpf(0)
        for m in range(k):
            total += (mpf(m * den + num) / den) ** (-s)
        return total

    eps = mpf(10) ** (-(digits + guard_digits()))
    M = _em_plan(sf, af, digits)
    while True:
        total = mpf(0)
        for m in range(M):
            total += (mpf(m * den + num) / den) ** (-s)
        x = mpf(M * den + num) / den
        xs = x ** (-s)
        total += x * xs / (s - 1) + xs / 2
        inv_x2 = 1 / (x * x)
        r = s * xs / (2 * x)
        j = 1
        prev = None
        converged = False
        while True:
            term = _bernoulli_mpf(2 * j) * r
            if abs(term) < eps * abs(total):
                converged = True
                break
            if prev is not None and abs(term) >= abs(prev):
                break
            total += term
            prev = term
            r *= (s + 2 * j - 1) * (s + 2 * j) * inv_x2 / ((2 * j + 1) * (2 * j + 2))
            j += 1
        if converged:
            log.debug("hurwitz_zeta s=%s a=%s: M=%d correction order=%d", sf, a, M, j - 1)
            return total
        M *= 2


def zeta_real(sigma: Number, digits: int) -> PrecReal:
    """Riemann zeta at real sigma > 1 to ``digits`` significant digits."""
    s = _sigma(sigma, digits)
    if s.value <= 1 + mpf("1e-6"):
        raise DomainError("sigma too close to the pole at 1")
    with working(digits, _em_cutoff(float(s.value), digits)):
        return PrecReal(_hurwitz_mpf(+s.value, Fraction(1), digits), digits)


def hurwitz_zeta(sigma: Number, a: Fraction, digits: int) -> PrecReal:
    a = Fraction(a)
    if not 0 < a <= 1:
        raise DomainError("Hurwitz parameter must lie in (0, 1]")
    s = _sigma(sigma, digits)
    with working(digits, _em_cutoff(float(s.value), digits)):
        return PrecReal(_hurwitz_mpf(+s.value, a, digits), digits)


def _l_mpf(c: QuadraticCharacter, s: mpf, digits: int) -> mpf:
    d = c.modulus
    sf = float(s)
    k = _direct_terms(sf, 1.0, digits)
    if k is not None:
        total = mpf(0)
        for n in range(1, k + 1):
            v = c(n)
            if v:
                total += v * mpf(n) ** (-s)
        return total
    total = mpf(0)
    for a in range(1, d + 1):
        v = c(a)
        if v:
            total += v * _hurwitz_mpf(s, Fraction(a, d), digits)
    return total / mpf(d) ** s


def _l_extra_digits(c: QuadraticCharacter, s: float) -> int:
    # d^-s zeta(s, a/d) ~ 1/(d (s-1)) while L = O(1): cancellation near s = 1
    return math.ceil(math.log10(c.modulus)) + max(0, math.ceil(-math.log10(s - 1)))


def dirichlet_l(c: QuadraticCharacter, sigma: Number, digits: int) -> PrecReal:
    """L(sigma, chi) = d^-sigma sum_a chi(a) zeta(sigma, a/d)."""
    s = _sigma(sigma, digits)
    sf = float(s.value)
    extra = _l_extra_digits(c, sf)
    with working(digits + extra, c.modulus * _em_cutoff(sf, digits)):
        return PrecReal(_l_mpf(c, +s.value, digits + extra), digits)


def zeta_even_exact(n: int) -> ExactSpecialValue:
    """zeta(n) = (-1)^(1+n/2) (2 pi)^n B_n / (2 n!) for even n >= 2."""
    if n < 2 or n % 2:
        raise DomainError("zeta_even_exact needs an even n >= 2")
    sign = 1 if (1 + n // 2) % 2 == 0 else -1
    coeff = sign * Fraction(2**n) * bernoulli(n) / (2 * factorial(n))
    return ExactSpecialValue(coeff, n, 0)


def l_even_exact(c: QuadraticCharacter, n: int) -> ExactSpecialValue:
    """L(n, chi) = (-1)^(1+n/2) (sqrt(d)/2) (2 pi/d)^n B_{n,chi} / n! for even chi, even n."""
    if c.parity != 0:
        raise ParityError("closed form at even n needs an even character (delta > 0)")
    if n < 2 or n % 2:
        raise ParityError("l_even_exact needs an even n >= 2")
    d = c.modulus
    sign = 1 if (1 + n // 2) % 2 == 0 else -1
    coeff = sign * Fraction(2 ** (n - 1), d**n) * gen_bernoulli(c, n)[n] / factorial(n)
    return ExactSpecialValue(coeff, n, 1, c.disc)


def zeta_dyadic_bounds(sigma: Number, digits: int = 30) -> tuple[PrecReal, PrecReal]:
    """(2^s - 1)/(2^s - 2) < zeta(s) < 2^s/(2^s - 2)."""
    s = _sigma(sigma, digits)
    with working(s.digits):
        t = mpf(2) ** s.value
        return PrecReal((t - 1) / (t - 2), s.digits), PrecReal(t / (t - 2), s.digits)
