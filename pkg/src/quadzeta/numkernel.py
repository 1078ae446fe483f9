"""Precision policy: exact rationals and decimal-precision reals.

Exact quantities are :class:`fractions.Fraction` (aliased ``BigRational``).
Approximate reals are :class:`PrecReal`, an immutable mpmath value tagged with
the number of significant decimal digits it is guaranteed to carry.  Every
operation runs ``guard_digits`` beyond the requested precision and rounds the
result back.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import total_ordering
from typing import Union

import mpmath
from mpmath import mpf

from .errors import DomainError

BigRational = Fraction

# |x| above this in rexp is reported as overflow rather than attempted.
EXP_ARG_LIMIT = 10**15

_LN2_LN10 = math.log10(2.0)


def guard_digits(terms: int = 1) -> int:
    """Extra working digits for a computation accumulating ``terms`` terms."""
    return 10 + math.ceil(math.log2(max(terms, 1)))


def working(digits: int, terms: int = 1):
    """Context manager setting mpmath to ``digits`` plus guard digits."""
    return mpmath.workdps(digits + guard_digits(terms))


Number = Union[int, Fraction, str, float, mpf, "PrecReal"]


def to_mpf(x: Number) -> mpf:
    """Convert to an mpf at the current mpmath precision."""
    if isinstance(x, PrecReal):
        return +x.value
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, (int, float, str)):
        return mpf(x)
    if isinstance(x, mpf):
        return +x
    raise TypeError(f"cannot convert {type(x).__name__} to a real")


def _round(value: mpf, digits: int) -> mpf:
    with mpmath.workdps(digits):
        return +value


@total_ordering
class PrecReal:
    """Real number known to ``digits`` significant decimal digits."""

    __slots__ = ("value", "digits")

    def __init__(self, value: Number, digits: int):
        if digits < 1:
            raise ValueError("digits must be positive")
        with working(digits):
            v = to_mpf(value)
        object.__setattr__(self, "value", _round(v, digits))
        object.__setattr__(self, "digits", int(digits))

    def __setattr__(self, name, value):
        raise AttributeError("PrecReal is immutable")

    # -- conversions -------------------------------------------------------
    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return mpmath.nstr(self.value, self.digits)

    def __repr__(self) -> str:
        return f"PrecReal({mpmath.nstr(self.value, min(self.digits, 20))}, digits={self.digits})"

    def __hash__(self):
        return hash((self.value, self.digits))

    def is_integer(self) -> bool:
        return mpmath.isint(self.value)

    def with_digits(self, digits: int) -> "PrecReal":
        return PrecReal(self.value, digits)

    # -- arithmetic --------------------------------------------------------
    def _binary(self, other, op, reflected=False):
        if isinstance(other, PrecReal):
            digits = min(self.digits, other.digits)
        elif isinstance(other, (int, Fraction, mpf)):
            digits = self.digits
        else:
            return NotImplemented
        with working(digits):
            a, b = self.value, to_mpf(other)
            if reflected:
                a, b = b, a
            return PrecReal(op(a, b), digits)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._binary(other, lambda a, b: a + b, True)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: a - b, True)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: a * b, True)

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: a / b, True)

    def __neg__(self):
        return PrecReal(-self.value, self.digits)

    def __abs__(self):
        return PrecReal(abs(self.value), self.digits)

    def __eq__(self, other):
        if isinstance(other, PrecReal):
            return self.value == other.value
        if isinstance(other, (int, float, mpf)):
            return self.value == other
        if isinstance(other, Fraction):
            return self.value * other.denominator == other.numerator
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, PrecReal):
            return self.value < other.value
        if isinstance(other, (int, float, mpf)):
            return self.value < other
        if isinstance(other, Fraction):
            return self.value * other.denominator < other.numerator
        return NotImplemented


def real(x: Number, digits: int) -> PrecReal:
    """Coerce ``x`` to a PrecReal; an existing PrecReal keeps its own precision."""
    if isinstance(x, PrecReal):
        return x
    return PrecReal(x, digits)


_const_lock = threading.Lock()
_pi_memo: dict[int, mpf] = {}
_e_memo: dict[int, mpf] = {}


def _memo_constant(memo: dict[int, mpf], digits: int, compute) -> mpf:
    v = memo.get(digits)
    if v is None:
        with working(digits):
            fresh = compute()
        with _const_lock:
            v = memo.setdefault(digits, fresh)
    return v


def pi(digits: int) -> PrecReal:
    if digits < 1:
        raise ValueError("digits must be positive")
    return PrecReal(_memo_constant(_pi_memo, digits, lambda: +mpmath.pi), digits)


def e(digits: int) -> PrecReal:
    if digits < 1:
        raise ValueError("digits must be positive")
    return PrecReal(_memo_constant(_e_memo, digits, lambda: +mpmath.e), digits)


def rexp(x: PrecReal) -> PrecReal:
    if not mpmath.isfinite(x.value):
        raise DomainError("rexp of a non-finite value")
    if abs(x.value) > EXP_ARG_LIMIT:
        if x.value > 0:
            raise OverflowError(f"exp({mpmath.nstr(x.value, 5)}) overflows")
        return PrecReal(0, x.digits)
    with working(x.digits):
        return PrecReal(mpmath.exp(x.value), x.digits)


def rlog(x: PrecReal) -> PrecReal:
    if x.value <= 0:
        raise DomainError(f"log of nonpositive value {mpmath.nstr(x.value, 10)}")
    with working(x.digits):
        return PrecReal(mpmath.log(x.value), x.digits)


def rsqrt(x: PrecReal) -> PrecReal:
    if x.value < 0:
        raise DomainError("square root of a negative value")
    with working(x.digits):
        return PrecReal(mpmath.sqrt(x.value), x.digits)


def rpow(b: int, x: PrecReal) -> PrecReal:
    """``b**x`` for a positive integer base; integer exponents are exact."""
    if b < 1:
        raise DomainError("rpow needs a positive integer base")
    if x.is_integer():
        m = int(x.value)
        if b > 1 and abs(m) * math.log10(b) > EXP_ARG_LIMIT:
            if m > 0:
                raise OverflowError("rpow overflows")
            return PrecReal(0, x.digits)
        exact = Fraction(b) ** m
        return PrecReal(exact, x.digits)
    with working(x.digits):
        arg = x.value * mpmath.log(b)
    if arg > EXP_ARG_LIMIT:
        raise OverflowError("rpow overflows")
    with working(x.digits):
        return PrecReal(mpmath.power(b, x.value), x.digits)


def log10_abs(x: Number) -> float:
    """Decimal exponent of |x| as a float; ``-inf`` for zero.  Safe for huge exponents."""
    v = x.value if isinstance(x, PrecReal) else to_mpf(x)
    if v == 0:
        return -math.inf
    man, exp = mpmath.frexp(abs(v))
    return math.log10(float(man)) + exp * _LN2_LN10
