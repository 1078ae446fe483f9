"""Exact classical and generalized Bernoulli numbers.

Generalized numbers B_{k,chi} are defined by

    sum_{a=1}^{d} chi(a) t e^{at} / (e^{dt} - 1) = sum_k B_{k,chi} t^k / k!

and are computed twice: by dividing the generating power series, and by the
conductor formula d^{k-1} sum_a chi(a) B_k(a/d).  A table is only returned
when both agree exactly.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import InternalInconsistency, ResourceError
from .quadchar import QuadraticCharacter

MAX_INDEX = 10_000

_lock = threading.Lock()
_classical: list[Fraction] = []
_generalized: dict[int, tuple[Fraction, ...]] = {}


@dataclass(frozen=True)
class BernoulliTable:
    """B_0..B_n_max with the convention B_1 = -1/2."""

    values: tuple[Fraction, ...]

    def __getitem__(self, k: int) -> Fraction:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def n_max(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class GenBernoulliTable:
    character: QuadraticCharacter
    values: tuple[Fraction, ...]

    def __getitem__(self, k: int) -> Fraction:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def n_max(self) -> int:
        return len(self.values) - 1


def _check_cap(n_max: int) -> None:
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if n_max > MAX_INDEX:
        raise ResourceError(f"Bernoulli index {n_max} exceeds cap {MAX_INDEX}")


def _tangent_bernoulli(n_max: int) -> list[Fraction]:
    # Tangent numbers T_1..T_m by the in-place integer recurrence, then
    # B_{2k} = (-1)^(k-1) 2k T_k / (4^k (4^k - 1)).
    m = n_max // 2
    out = [Fraction(0)] * (n_max + 1)
    out[0] = Fraction(1)
    if n_max >= 1:
        out[1] = Fraction(-1, 2)
    if m == 0:
        return out
    t = [0] * (m + 1)
    t[1] = 1
    for k in range(2, m + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, m + 1):
        for j in range(k, m + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    for k in range(1, m + 1):
        four = 1 << (2 * k)
        b = Fraction(2 * k * t[k], four * (four - 1))
        out[2 * k] = b if k % 2 else -b
    return out


def bernoulli_numbers(n_max: int) -> BernoulliTable:
    _check_cap(n_max)
    global _classical
    if len(_classical) <= n_max:
        fresh = _tangent_bernoulli(max(n_max, 2 * len(_classical)))
        with _lock:
            if len(_classical) < len(fresh):
                _classical = fresh
    return BernoulliTable(tuple(_classical[: n_max + 1]))


def bernoulli(k: int) -> Fraction:
    return bernoulli_numbers(k)[k]


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    """B_n(x) = sum_k C(n,k) B_k x^(n-k), exactly."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = Fraction(x)
    b = bernoulli_numbers(n)
    total = Fraction(0)
    power = Fraction(1)
    # accumulate from k = n down to 0 so x^(n-k) is built incrementally
    for k in range(n, -1, -1):
        if b[k]:
            total += comb(n, k) * b[k] * power
        power *= x
    return total


def _gen_series(c: QuadraticCharacter, n_max: int) -> list[Fraction]:
    d = c.modulus
    residues = [(a, c(a)) for a in range(1, d + 1) if c(a)]
    # numerator sum_a chi(a) e^{at}, and E(t) = (e^{dt} - 1)/(dt)
    num = [Fraction(sum(v * a**k for a, v in residues), factorial(k)) for k in range(n_max + 1)]
    den = [Fraction(d**k, factorial(k + 1)) for k in range(n_max + 1)]
    quo: list[Fraction] = []
    for k in range(n_max + 1):
        acc = num[k]
        for j in range(1, k + 1):
            acc -= den[j] * quo[k - j]
        quo.append(acc)
    return [quo[k] * factorial(k) / d for k in range(n_max + 1)]


def _gen_conductor(c: QuadraticCharacter, n_max: int) -> list[Fraction]:
    d = c.modulus
    residues = [(a, c(a)) for a in range(1, d + 1) if c(a)]
    out = []
    for k in range(n_max + 1):
        s = sum(v * bernoulli_poly(k, Fraction(a, d)) for a, v in residues)
        out.append(Fraction(d) ** (k - 1) * s)
    return out


def gen_bernoulli(c: QuadraticCharacter, n_max: int) -> GenBernoulliTable:
    """B_{k,chi} for k <= n_max, cross-checked by two algorithms."""
    _check_cap(n_max)
    cached = _generalized.get(c.delta)
    if cached is None or len(cached) <= n_max:
        series = _gen_series(c, n_max)
        conductor = _gen_conductor(c, n_max)
        for k, (s, t) in enumerate(zip(series, conductor)):
            if s != t:
                raise InternalInconsistency(
                    f"B_{{{k},chi}} for delta={c.delta}: series {s} != conductor {t}"
                )
        with _lock:
            prev = _generalized.get(c.delta)
            if prev is None or len(prev) < len(series):
                _generalized[c.delta] = tuple(series)
        cached = _generalized[c.delta]
    return GenBernoulliTable(c, cached[: n_max + 1])


def l_nonpositive(c: QuadraticCharacter, n: int) -> Fraction:
    """L(1 - n, chi) = -B_{n,chi} / n."""
    if n < 1:
        raise ValueError("n must be positive")
    return -gen_bernoulli(c, n)[n] / n
