from fractions import Fraction

import mpmath
import pytest

from quadzeta.errors import DomainError, ParityError
from quadzeta.lfunc import (
    ExactSpecialValue,
    dirichlet_l,
    hurwitz_zeta,
    l_even_exact,
    zeta_dyadic_bounds,
    zeta_even_exact,
    zeta_real,
)
from quadzeta.quadchar import character


def tol(digits, slack=1):
    return mpmath.mpf(10) ** (slack - digits)


def direct_sum(f, n_terms, digits):
    with mpmath.workdps(digits + 10):
        return mpmath.fsum(f(n) for n in range(1, n_terms + 1))


def test_zeta_real_examples():
    assert str(zeta_real(2, 12)) == "1.64493406685"
    assert str(zeta_real(4, 12)) == "1.08232323371"
    assert str(zeta_real(3, 12)) == "1.20205690316"


def test_zeta3_direct_summation_with_integral_tail():
    D = 12
    N = 10**5
    # sum_{n<=N} n^-3 + tail with N^-2/2 - N^-3/2 < tail < N^-2/2
    with mpmath.workdps(30):
        partial = direct_sum(lambda n: mpmath.mpf(n) ** -3, N, 20)
        lo = partial + mpmath.mpf(N) ** -2 / 2 - mpmath.mpf(N) ** -3 / 2
        hi = partial + mpmath.mpf(N) ** -2 / 2
        v = zeta_real(3, D).value
        assert lo - tol(D) < v < hi + tol(D)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_zeta_exact_matches_numeric(n):
    D = 50
    exact = zeta_even_exact(n).render(D)
    numeric = zeta_real(n, D)
    with mpmath.workdps(D + 10):
        assert abs(exact.value - numeric.value) < tol(D, 3)


def test_zeta_even_exact_coefficients():
    assert zeta_even_exact(2) == ExactSpecialValue(Fraction(1, 6), 2, 0)
    assert zeta_even_exact(4).coeff == Fraction(1, 90)
    assert zeta_even_exact(12).coeff == Fraction(691, 638512875)
    assert str(zeta_even_exact(2)) == "1/6*pi^2"
    for n in range(2, 60, 2):
        assert zeta_even_exact(n).coeff > 0


@pytest.mark.parametrize("n", [0, 1, 3, -2])
def test_zeta_even_exact_domain(n):
    with pytest.raises(DomainError):
        zeta_even_exact(n)


@pytest.mark.parametrize("sigma", [1, "0.5", "1.0000001"])
def test_zeta_domain(sigma):
    with pytest.raises(DomainError):
        zeta_real(sigma, 20)


@pytest.mark.parametrize("sigma", ["1.01", "1.5", 2, "3.3", 7, 40, 300, 5000])
def test_zeta_against_mpmath(sigma):
    D = 40
    v = zeta_real(sigma, D)
    with mpmath.workdps(D + 20):
        ref = mpmath.zeta(mpmath.mpf(sigma))
        assert abs(v.value / ref - 1) < tol(D)


def test_hurwitz_examples():
    D = 30
    with mpmath.workdps(D + 10):
        z2 = zeta_real(2, D).value
        assert abs(hurwitz_zeta(2, Fraction(1), D).value - z2) < tol(D, 2)
        # zeta(s, 1/2) = (2^s - 1) zeta(s)
        assert abs(hurwitz_zeta(2, Fraction(1, 2), D).value - 3 * z2) < tol(D, 2)
        oracle = direct_sum(lambda m: (m - 1 + mpmath.mpf(1) / 4) ** -3, 20000, D)
        tail_upper = (20000 + mpmath.mpf(1) / 4) ** -2 / 2 + (20000 + mpmath.mpf(1) / 4) ** -3
        v = hurwitz_zeta(3, Fraction(1, 4), D).value
        assert 64 < v
        assert oracle < v < oracle + tail_upper


@pytest.mark.parametrize("a", [Fraction(1, 7), Fraction(3, 5), Fraction(1, 1000), Fraction(99, 100)])
@pytest.mark.parametrize("sigma", ["1.2", 3, 25])
def test_hurwitz_against_mpmath(a, sigma):
    D = 40
    v = hurwitz_zeta(sigma, a, D)
    with mpmath.workdps(D + 20):
        ref = mpmath.zeta(mpmath.mpf(sigma), mpmath.mpf(a.numerator) / a.denominator)
        assert abs(v.value / ref - 1) < tol(D)


def test_hurwitz_domain():
    with pytest.raises(DomainError):
        hurwitz_zeta(2, Fraction(0), 20)
    with pytest.raises(DomainError):
        hurwitz_zeta(2, Fraction(3, 2), 20)


@pytest.mark.parametrize("d", [3, 5])
@pytest.mark.parametrize("sigma", [2, 3])
def test_hurwitz_consistency(d, sigma):
    D = 40
    with mpmath.workdps(D + 10):
        total = sum(hurwitz_zeta(sigma, Fraction(a, d), D).value for a in range(1, d + 1))
        assert abs(total / mpmath.mpf(d) ** sigma - zeta_real(sigma, D).value) < tol(D, 2)


def test_dirichlet_l_examples():
    D = 30
    c5 = character(5)
    v = dirichlet_l(c5, 2, D)
    with mpmath.workdps(D + 10):
        closed = 4 * mpmath.sqrt(5) * mpmath.pi**2 / 125
        assert abs(v.value - closed) < tol(D)
    assert str(dirichlet_l(c5, 2, 12)) == "0.70621140326"

    # Catalan's constant by its alternating series, pairs summed to speed convergence
    with mpmath.workdps(D + 10):
        catalan = mpmath.nsum(lambda k: (-1) ** k / (2 * k + 1) ** 2, [0, mpmath.inf])
    assert abs(float(dirichlet_l(character(-4), 2, 12)) - 0.915965594177) < 1e-12
    with mpmath.workdps(D):
        assert abs(dirichlet_l(character(-4), 2, D).value - catalan) < tol(D)

    big = dirichlet_l(c5, 64, 30)
    with mpmath.workdps(40):
        # 1 + chi(2) 2^-64 + ... so L - 1 ~ -2^-64
        assert abs(big.value - 1) < mpmath.mpf(10) ** -19
        assert abs((big.value - 1) + mpmath.mpf(2) ** -64) < mpmath.mpf(2) ** -100


@pytest.mark.parametrize("delta", [5, 8, 12, 13, -4, -8, -3, 21])
@pytest.mark.parametrize("sigma", ["1.05", "1.5", 2, "3.14159", 11, 200])
def test_dirichlet_l_against_mpmath(delta, sigma):
    D = 40
    c = character(delta)
    v = dirichlet_l(c, sigma, D)
    with mpmath.workdps(D + 20):
        s = mpmath.mpf(sigma)
        ref = mpmath.fsum(
            c(a) * mpmath.zeta(s, mpmath.mpf(a) / c.modulus) for a in range(1, c.modulus + 1)
        ) / mpmath.mpf(c.modulus) ** s
        assert abs(v.value / ref - 1) < tol(D)


def test_l_even_exact_examples():
    c5 = character(5)
    v = l_even_exact(c5, 2)
    assert v.coeff == Fraction(4, 125) and v.pi_power == 2 and v.sqrt_disc == 1
    assert str(v) == "4/125*pi^2*sqrt(5)"
    D = 30
    with mpmath.workdps(D):
        assert abs(v.render(D).value - dirichlet_l(c5, 2, D).value) < mpmath.mpf(10) ** -28
    with pytest.raises(ParityError):
        l_even_exact(character(-4), 2)
    with pytest.raises(ParityError):
        l_even_exact(c5, 3)


@pytest.mark.parametrize("delta", [5, 8, 12, 13])
@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_l_exact_matches_numeric(delta, n):
    D = 50
    c = character(delta)
    exact = l_even_exact(c, n)
    assert exact.coeff > 0
    with mpmath.workdps(D + 10):
        assert abs(exact.render(D).value - dirichlet_l(c, n, D).value) < tol(D, 3)


def test_dyadic_bounds_examples():
    lo, hi = zeta_dyadic_bounds(2)
    assert lo == Fraction(3, 2) and hi == 2
    lo, hi = zeta_dyadic_bounds(3)
    assert lo == PrecRealEq(Fraction(7, 6)) and hi == PrecRealEq(Fraction(4, 3))
    lo, hi = zeta_dyadic_bounds(10)
    z = zeta_real(10, 30)
    assert lo == PrecRealEq(Fraction(1023, 1022)) and hi == PrecRealEq(Fraction(1024, 1022))
    assert lo < z < hi
    assert abs(float(z) - 1.000994575) < 1e-9
    with pytest.raises(DomainError):
        zeta_dyadic_bounds(1)


class PrecRealEq:
    """Equality up to the stored precision, for rationals without a finite binary form."""

    def __init__(self, frac):
        self.frac = frac

    def __eq__(self, other):
        with mpmath.workdps(other.digits + 5):
            ref = mpmath.mpf(self.frac.numerator) / self.frac.denominator
            return abs(other.value - ref) <= abs(ref) * mpmath.mpf(10) ** (1 - other.digits)


def test_dyadic_bracketing_grid():
    D = 30
    grid = [mpmath.mpf("1.01") + (64 - mpmath.mpf("1.01")) * k / 49 for k in range(50)]
    for s in grid:
        s = mpmath.nstr(s, 12)
        lo, hi = zeta_dyadic_bounds(s, D)
        z = zeta_real(s, D)
        assert lo < z < hi, s
