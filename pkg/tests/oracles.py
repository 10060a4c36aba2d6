"""Independent reference computations used only by the tests.

None of these share code with the package: pi comes from Machin's formula in
integer arithmetic, e from an exact factorial sum, continued fractions are
folded from the back with Fraction, and primality is trial division.
"""
from fractions import Fraction
from math import isqrt


def _arctan_inv(x: int, scale: int) -> int:
    total = term = scale // x
    x2 = x * x
    k = 1
    while term:
        term //= x2
        k += 2
        total += -(term // k) if (k // 2) % 2 else term // k
    return total


def pi_digits(places: int) -> str:
    """pi truncated to ``places`` decimals (Machin, 10 guard digits)."""
    guard = 10
    scale = 10 ** (places + guard)
    pi = 4 * (4 * _arctan_inv(5, scale) - _arctan_inv(239, scale))
    s = str(pi // 10**guard)
    return s[0] + "." + s[1:]


def e_fraction(terms: int = 800) -> tuple[Fraction, Fraction]:
    """Partial sum of 1/k! and a bound on the omitted tail."""
    total, fact = Fraction(0), 1
    for k in range(terms):
        if k:
            fact *= k
        total += Fraction(1, fact)
    return total, Fraction(2, fact * terms)


def fold_cf(a0: int, quotients) -> Fraction:
    """Value of the finite continued fraction, evaluated from the last term."""
    value = None
    for a in reversed(list(quotients)):
        value = Fraction(a) if value is None else a + 1 / value
    return Fraction(a0) if value is None else a0 + 1 / value


def truncate(x: Fraction, places: int) -> str:
    n = x.numerator * 10**places // x.denominator
    s = str(n).rjust(places + 1, "0")
    return s[:-places] + "." + s[-places:]


def is_prime_trial(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % f for f in range(3, isqrt(n) + 1, 2))


def primes_below(n: int) -> list[int]:
    return [k for k in range(2, n + 1) if is_prime_trial(k)]
