"""Fundamental discriminants and the real primitive character of a quadratic field."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import mpmath

from .errors import NotFundamental
from .numkernel import PrecReal, working

# Characters with modulus up to this size get a lazily built value table.
TABLE_LIMIT = 10**6


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    if n % 4 == 0:
        return False
    p = 3
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of |n|, ascending (trial division)."""
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), for any integers a and n."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    # (a/2) factor
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        n >>= v
        if v & 1 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class Discriminant:
    """Signed fundamental discriminant of a quadratic field."""

    delta: int

    @property
    def modulus(self) -> int:
        return abs(self.delta)

    def ramified_primes(self) -> list[int]:
        return prime_factors(self.delta)


def is_fundamental(delta: int) -> bool:
    if delta in (0, 1):
        return False
    if delta % 4 == 1:
        return is_squarefree(delta)
    if delta % 4 == 0:
        m = delta // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def make_discriminant(delta: int) -> Discriminant:
    delta = int(delta)
    if not is_fundamental(delta):
        raise NotFundamental(f"{delta} is not a fundamental discriminant")
    return Discriminant(delta)


@dataclass(frozen=True)
class QuadraticCharacter:
    """The Kronecker character n -> (delta/n) of modulus d = |delta|.

    Instances are callable: ``c(n)`` returns chi(n) in {-1, 0, 1}.
    """

    disc: Discriminant
    _table: list = field(default_factory=list, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(
        default_factory=threading.Lock, init=False, repr=False, compare=False
    )

    @property
    def delta(self) -> int:
        return self.disc.delta

    @property
    def modulus(self) -> int:
        return self.disc.modulus

    @property
    def parity(self) -> int:
        return 0 if self.disc.delta > 0 else 1

    def _values(self) -> list[int] | None:
        d = self.modulus
        if d > TABLE_LIMIT:
            return None
        if not self._table:
            with self._lock:
                if not self._table:
                    delta = self.delta
                    self._table.extend(kronecker(delta, a) for a in range(d))
        return self._table

    def __call__(self, n: int) -> int:
        table = self._values()
        if table is None:
            return kronecker(self.delta, n)
        if n < 0:
            # chi(-1) = sign(delta); the table only covers residues
            sign = 1 if self.delta > 0 else -1
            return sign * table[(-n) % self.modulus]
        return table[n % self.modulus]


def character(delta: int) -> QuadraticCharacter:
    """Character attached to Q(sqrt(delta)); raises NotFundamental on bad input."""
    return QuadraticCharacter(make_discriminant(delta))


def chi(c: QuadraticCharacter, n: int) -> int:
    return c(n)


def parity(c: QuadraticCharacter) -> int:
    return c.parity


def gauss_sum(c: QuadraticCharacter, digits: int) -> tuple[PrecReal, PrecReal]:
    """Real and imaginary parts of sum_{a=1}^{d} chi(a) exp(2 pi i a / d)."""
    d = c.modulus
    with working(digits, d):
        re = mpmath.mpf(0)
        im = mpmath.mpf(0)
        for a in range(1, d + 1):
            v = c(a)
            if v:
                x = mpmath.mpf(2 * a) / d
                re += v * mpmath.cospi(x)
                im += v * mpmath.sinpi(x)
        return PrecReal(re, digits), PrecReal(im, digits)

