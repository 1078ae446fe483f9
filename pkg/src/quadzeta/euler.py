"""Prime sieve, splitting types, and truncated Euler products.

These products converge slowly but share no code with the series evaluators,
which makes them the ground truth the dyadic series is checked against.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import mpf

from .errors import DomainError, ResourceError
from .lfunc import dirichlet_l, zeta_real
from .numkernel import Number, PrecReal, real, working
from .quadchar import QuadraticCharacter

SIEVE_CAP = 10**8
SEGMENT = 1 << 20


def _small_primes(n: int) -> np.ndarray:
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags)


@lru_cache(maxsize=4)
def _sieve_cached(limit: int) -> np.ndarray:
    base = _small_primes(math.isqrt(limit))
    chunks = []
    for low in range(0, limit + 1, SEGMENT):
        high = min(low + SEGMENT, limit + 1)
        flags = np.ones(high - low, dtype=bool)
        if low == 0:
            flags[: min(2, high)] = False
        for p in base:
            p = int(p)
            if p * p >= high:
                break
            start = max(p * p, -(-low // p) * p)
            flags[start - low :: p] = False
        chunks.append(np.flatnonzero(flags) + low)
    out = np.concatenate(chunks).astype(np.int64)
    out.flags.writeable = False
    return out


def sieve(limit: int) -> np.ndarray:
    """All primes <= limit in ascending order (read-only int64 array)."""
    if limit < 2:
        raise ValueError("sieve limit must be at least 2")
    if limit > SIEVE_CAP:
        raise ResourceError(f"sieve limit {limit} exceeds cap {SIEVE_CAP}")
    return _sieve_cached(int(limit))


class Splitting(enum.Enum):
    SPLIT = 1
    INERT = -1
    RAMIFIED = 0


@dataclass(frozen=True)
class PrimeClass:
    prime: int
    kind: Splitting


def classify(c: QuadraticCharacter, p: int) -> PrimeClass:
    return PrimeClass(int(p), Splitting(c(int(p))))


def primes_of_class(c: QuadraticCharacter, kind: Splitting, limit: int) -> list[int]:
    target = kind.value
    return [p for p in map(int, sieve(limit)) if c(p) == target]


@dataclass(frozen=True)
class ProductTruncation:
    """Truncated Euler product with a bound on |log(true / truncated)|."""

    value: PrecReal
    prime_limit: int
    tail_bound: PrecReal


def _check_sigma(sigma: PrecReal) -> None:
    if sigma.value <= 1:
        raise DomainError(f"Euler products need sigma > 1, got {sigma}")


def _tail(sigma: mpf, limit: int, scale: int) -> mpf:
    # sum_{n > P} scale * n^-sigma <= scale * P^(1-sigma) / (sigma - 1)
    return scale * mpf(limit) ** (1 - sigma) / (sigma - 1)


def _factor_product(primes, sigma: mpf) -> mpf:
    prod = mpf(1)
    for p in primes:
        prod /= 1 - mpf(p) ** (-sigma)
    return prod


def p_product(
    c: QuadraticCharacter, which: int, sigma: Number, prime_limit: int, digits: int
) -> ProductTruncation:
    """prod over split (which=1) or inert (which=2) primes p <= P of (1 - p^-sigma)^-1."""
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    s = real(sigma, digits)
    _check_sigma(s)
    kind = Splitting.SPLIT if which == 1 else Splitting.INERT
    primes = primes_of_class(c, kind, prime_limit)
    with working(digits, len(primes)):
        value = _factor_product(primes, s.value)
        tail = _tail(s.value, prime_limit, 2)
        return ProductTruncation(PrecReal(value, digits), prime_limit, PrecReal(tail, digits))


def l1_product(c: QuadraticCharacter, sigma: Number, prime_limit: int, digits: int) -> ProductTruncation:
    """L_1 = prod over split p of (1 - p^-s)^-2, i.e. p_1 squared."""
    p1 = p_product(c, 1, sigma, prime_limit, digits)
    with working(digits):
        return ProductTruncation(
            PrecReal(p1.value.value**2, digits), prime_limit, PrecReal(2 * p1.tail_bound.value, digits)
        )


def l2_product(c: QuadraticCharacter, sigma: Number, prime_limit: int, digits: int) -> ProductTruncation:
    """L_2 = prod over inert p of (1 - p^-2s)^-1, i.e. p_2 at 2s."""
    s = real(sigma, digits)
    return p_product(c, 2, 2 * s, prime_limit, digits)


def ramified_factor(c: QuadraticCharacter, sigma: Number, digits: int) -> PrecReal:
    """prod over p | d of (1 - p^-sigma)^-1."""
    s = real(sigma, digits)
    with working(digits):
        return PrecReal(_factor_product(c.disc.ramified_primes(), s.value), digits)


def dedekind_zeta(c: QuadraticCharacter, sigma: Number, digits: int) -> PrecReal:
    """zeta_K(sigma) = zeta(sigma) L(sigma, chi)."""
    s = real(sigma, digits)
    _check_sigma(s)
    with working(digits):
        z = zeta_real(s, digits + 2).value
        lv = dirichlet_l(c, s, digits + 2).value
        return PrecReal(z * lv, digits)


def dedekind_zeta_product(c: QuadraticCharacter, sigma: Number, prime_limit: int, digits: int) -> ProductTruncation:
    """Ramified factor times L_1 L_2, truncated at prime_limit."""
    s = real(sigma, digits)
    l1 = l1_product(c, s, prime_limit, digits)
    l2 = l2_product(c, s, prime_limit, digits)
    ram = ramified_factor(c, s, digits)
    with working(digits):
        v = ram.value * l1.value.value * l2.value.value
        tail = l1.tail_bound.value + l2.tail_bound.value
        return ProductTruncation(PrecReal(v, digits), prime_limit, PrecReal(tail, digits))


def log_abs_gap(a: PrecReal, b: PrecReal) -> PrecReal:
    """|log a - log b| at the lower of the two precisions."""
    digits = min(a.digits, b.digits)
    with working(digits):
        return PrecReal(abs(mpmath.log(a.value) - mpmath.log(b.value)), digits)
