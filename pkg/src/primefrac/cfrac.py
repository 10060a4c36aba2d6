"""Exact continued-fraction engine.

Convergents are built with the integer recurrence ``Q[n+1] = a[n+1] Q[n] + Q[n-1]``
and never touch floating point.  A finite prefix of an infinite continued
fraction pins the true value to the interval between ``P/Q`` and
``(P + P')/(Q + Q')``; decimal digits are reported only where both ends of
that interval truncate identically.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import mpmath

from .exactnum import (
    EXACT,
    CertifiedDecimal,
    DomainError,
    decimal_length,
    from_decimal,
    render_scaled,
    round_scaled,
    to_certified_decimal,
    truncate_scaled,
)
from .primes import QuotientStream

_LOG2_10 = math.log2(10)


class StreamExhausted(ValueError):
    """The quotient stream ran out before the requested number of convergents."""

    def __init__(self, partial: list, count: int):
        super().__init__(f"stream exhausted after {count} quotients")
        self.partial = partial
        self.count = count


# ---------------------------------------------------------------- quotient sequences


class ArithmeticQuotients:
    """``start, start + step, start + 2 step, …`` (infinite, re-iterable)."""

    def __init__(self, start: int = 1, step: int = 1):
        self.start, self.step = start, step

    def __iter__(self):
        return itertools.count(self.start, self.step)


class FactorialQuotients:
    """``1!, 2!, 3!, …``"""

    def __iter__(self):
        f = 1
        for k in itertools.count(1):
            f *= k
            yield f


class FibonacciQuotients:
    """``1, 1, 2, 3, 5, 8, …``"""

    def __iter__(self):
        a, b = 1, 1
        while True:
            yield a
            a, b = b, a + b


class ConstantQuotients:
    def __init__(self, value: int):
        self.value = value

    def __iter__(self):
        return itertools.repeat(self.value)


@dataclass(frozen=True)
class ContinuedFraction:
    """``[a0; a1, a2, …]``.

    ``terminating=False`` (the default) means the quotients are a prefix of an
    infinite expansion, as for every prime family; ``True`` means the listed
    quotients are the whole expansion and its value is the last convergent.
    Quotients may be any re-iterable (a tuple, a stream, or an infinite
    sequence object); a one-shot iterator can be evaluated only once.
    """

    a0: int
    quotients: Iterable[int]
    terminating: bool = False

    @classmethod
    def from_stream(cls, stream: QuotientStream, a0: int = 0) -> "ContinuedFraction":
        return cls(a0, stream.quotients)

    @classmethod
    def finite(cls, a0: int, quotients: Sequence[int]) -> "ContinuedFraction":
        return cls(a0, tuple(quotients), terminating=True)


@dataclass(frozen=True)
class ConvergentPair:
    """Rolling recurrence state after consuming ``index`` quotients."""

    index: int
    p_prev: int
    q_prev: int
    p: int
    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def determinant(self) -> int:
        return self.p * self.q_prev - self.p_prev * self.q


def iter_convergents(cf: ContinuedFraction) -> Iterator[ConvergentPair]:
    """Yield the state for ``n = 0, 1, 2, …`` (``n = 0`` is ``a0/1``)."""
    p_prev, q_prev, p, q = 1, 0, cf.a0, 1
    yield ConvergentPair(0, p_prev, q_prev, p, q)
    for n, a in enumerate(cf.quotients, start=1):
        if a < 1:
            raise DomainError(f"partial quotient a[{n}] = {a} is not a positive integer")
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield ConvergentPair(n, p_prev, q_prev, p, q)


def convergents(cf: ContinuedFraction, n: int) -> list[Fraction]:
    """``[a0; a1, …, ak]`` for ``k = 1..n`` as exact fractions."""
    out = []
    for pair in itertools.islice(iter_convergents(cf), 1, n + 1):
        out.append(Fraction(pair.p, pair.q))
    if len(out) < n:
        raise StreamExhausted(out, len(out))
    return out


def denominators(cf: ContinuedFraction, n: int) -> list[int]:
    """``Q_0 … Q_n``."""
    out = [pair.q for pair in itertools.islice(iter_convergents(cf), n + 1)]
    if len(out) < n + 1:
        raise StreamExhausted(out, len(out) - 1)
    return out


# ---------------------------------------------------------------- certification


def _same_truncation(lo: tuple[int, int], hi: tuple[int, int], places: int) -> bool:
    (a, b), (c, d) = lo, hi
    if (a < 0) != (c < 0):
        return False
    return truncate_scaled(a, b, places) == truncate_scaled(c, d, places)


def max_certified_places(lo: tuple[int, int], hi: tuple[int, int], cap: int | None = None) -> int:
    """Largest ``D`` such that every real in ``[lo, hi]`` truncates alike at ``D`` places."""
    (a, b), (c, d) = lo, hi
    num = abs(a * d - c * b)
    den = b * d
    if num == 0:
        places = cap if cap is not None else 0
    else:
        # width = num/den, so roughly log10(den/num) places can agree
        places = max(0, decimal_length(den) - decimal_length(num) + 1)
        if cap is not None:
            places = min(places, cap)
    while places > 0 and not _same_truncation(lo, hi, places):
        places -= 1
    if places == 0 and not _same_truncation(lo, hi, 0):
        return -1
    return places


def round_decimal(lo: Fraction, hi: Fraction, places: int) -> str | None:
    """Half-up rounding to ``places`` shared by all of ``[lo, hi]``, or None."""
    a = round_scaled(lo.numerator, lo.denominator, places)
    b = round_scaled(hi.numerator, hi.denominator, places)
    if a != b or (a == 0 and (lo < 0) != (hi < 0)):
        return None
    return render_scaled(a, places, negative=lo < 0 and a == 0)


def _render(p: int, q: int, places: int) -> str:
    scaled = truncate_scaled(p, q, places)
    return render_scaled(scaled, places, negative=(p < 0) != (q < 0) and scaled == 0)


@dataclass(frozen=True)
class EvaluationResult:
    """Outcome of :func:`evaluate`.

    ``value`` renders the last convergent used; its certified exponent says how
    many of those places are proven.  ``certified_digits`` is everything the
    consumed terms prove (it can far exceed the rendered length).
    ``final_error_bound`` is ``1/(Q[n-1] Q[n])`` for the last two convergents,
    or zero for a terminating expansion.
    """

    value: CertifiedDecimal
    terms_used: int
    final_error_bound: Fraction
    certified_digits: int
    convergent: Fraction
    exhausted: bool
    enclosure: tuple[Fraction, Fraction]

    @property
    def certified(self) -> bool:
        return self.value.exact or self.value.certified_digits >= len(self.value.digits.partition(".")[2])

    def truncated(self, places: int) -> str:
        """The true value truncated to ``places``; raises if not proven."""
        if places > self.certified_digits:
            raise DomainError(f"only {self.certified_digits} places are certified")
        return _render(self.convergent.numerator, self.convergent.denominator, places)

    def rounded(self, places: int) -> str:
        """The true value rounded half-up to ``places``; raises if not proven."""
        lo, hi = self.enclosure
        out = round_decimal(lo, hi, places)
        if out is None:
            raise DomainError(f"rounding to {places} places is not decided by the enclosure")
        return out


def evaluate(cf: ContinuedFraction, digits: int, exhaust: bool = False) -> EvaluationResult:
    """Evaluate ``cf`` to ``digits`` certified places after the decimal point.

    Quotients are consumed only until the digits are proven, unless
    ``exhaust`` is set, in which case the whole (finite) stream is used and
    ``certified_digits`` reports the full reach.  If the stream ends first the
    result carries the smaller certified count actually achieved.
    """
    if digits < 1:
        raise DomainError("digits must be >= 1")
    need_bits = digits * _LOG2_10
    last = None
    stopped_early = False
    for pair in iter_convergents(cf):
        last = pair
        if pair.index == 0 or exhaust:
            continue
        # width of the tail interval is 1/(Q (Q + Q'))
        if 2 * pair.q.bit_length() < need_bits:
            continue
        lo, hi = _tail_interval(pair)
        if _same_truncation(lo, hi, digits):
            stopped_early = True
            break
    pair = last
    convergent = Fraction(pair.p, pair.q)
    if cf.terminating and not stopped_early:
        value = to_certified_decimal(convergent, digits)
        return EvaluationResult(value, pair.index, Fraction(0), digits, convergent, True, (convergent, convergent))
    if pair.index == 0:
        lo, hi = (pair.p, 1), (pair.p + 1, 1)
        bound = Fraction(1)
    else:
        lo, hi = _tail_interval(pair)
        bound = Fraction(1, pair.q_prev * pair.q)
    reach = max_certified_places(lo, hi)
    value = CertifiedDecimal(_render(pair.p, pair.q, digits), -max(0, min(reach, digits)))
    enclosure = tuple(sorted((Fraction(*lo), Fraction(*hi))))
    return EvaluationResult(value, pair.index, bound, max(reach, 0), convergent, not stopped_early, enclosure)


def _tail_interval(pair: ConvergentPair) -> tuple[tuple[int, int], tuple[int, int]]:
    """All values ``[…; a_n, t]`` for a tail ``t >= 1`` lie between these two points."""
    return (pair.p, pair.q), (pair.p + pair.p_prev, pair.q + pair.q_prev)


# ---------------------------------------------------------------- real -> CF


@dataclass(frozen=True)
class ExpansionResult:
    """``certified_terms[0]`` is ``a0``; later entries are the partial quotients."""

    certified_terms: list[int]
    terminated_reason: str  # "interval-ambiguous", "max-terms" or "exact"

    @property
    def a0(self) -> int:
        return self.certified_terms[0]

    @property
    def quotients(self) -> list[int]:
        return self.certified_terms[1:]


def expand_interval(lo: Fraction, hi: Fraction, max_terms: int) -> ExpansionResult:
    """Partial quotients shared by every real in ``[lo, hi]``."""
    a, b = lo.numerator, lo.denominator
    c, d = hi.numerator, hi.denominator
    terms: list[int] = []
    while len(terms) < max_terms:
        qa, qc = a // b, c // d
        if qa != qc:
            return ExpansionResult(terms, "interval-ambiguous")
        terms.append(qa)
        ra, rc = a - qa * b, c - qc * d
        if ra == 0 and rc == 0:
            return ExpansionResult(terms, "exact")
        if ra == 0 or rc == 0:
            # one endpoint is the integer itself; the next term is unbounded
            return ExpansionResult(terms, "interval-ambiguous")
        a, b, c, d = b, ra, d, rc
    return ExpansionResult(terms, "max-terms")


def expand_real(value: CertifiedDecimal, max_terms: int) -> ExpansionResult:
    """Continued-fraction terms certified for every real within ``value``'s error."""
    v = from_decimal(value.digits)
    if value.exact:
        return expand_interval(v, v, max_terms)
    if value.certified_exponent == math.inf:
        raise DomainError("value carries no finite error bound")
    eps = Fraction(10) ** int(value.certified_exponent)
    return expand_interval(v - eps, v + eps, max_terms)


def read_digit_file(path) -> CertifiedDecimal:
    """Load a digit file: optional ``#`` comment lines, then one numeral that may span lines.

    The numeral is taken as a truncation, certified to its last written place.
    """
    body = []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            stripped = line.strip()
            if stripped.startswith("#") or not stripped:
                continue
            body.append(stripped)
    text = "".join(body)
    from_decimal(text)  # validates
    places = len(text.partition(".")[2])
    return CertifiedDecimal(text, -places)


# ---------------------------------------------------------------- closed forms


def champernowne(digits: int) -> CertifiedDecimal:
    """``0.123456789101112…`` truncated to ``digits`` places."""
    if digits < 1:
        raise DomainError("digits must be >= 1")
    chunks, total, k = [], 0, 1
    while total < digits:
        s = str(k)
        chunks.append(s)
        total += len(s)
        k += 1
    return CertifiedDecimal("0." + "".join(chunks)[:digits], -digits)


def _hypergeometric_sum(nu: Fraction, y: Fraction, rel_tol: Fraction) -> tuple[Fraction, Fraction]:
    """``sum_k y^k / (k! (nu+1)_k)`` and a rigorous bound on the omitted tail."""
    total = Fraction(0)
    term = Fraction(1)
    k = 0
    while True:
        total += term
        ratio = y / ((k + 1) * abs(nu + 1 + k))
        # ratios decrease once k + nu + 1 > 0, so a geometric tail bound applies
        if k + nu + 1 > 0 and ratio <= Fraction(1, 2):
            tail = abs(term) * ratio / (1 - ratio)
            if total != 0 and tail <= rel_tol * abs(total):
                return total, tail
        term = term * y / ((k + 1) * (nu + 1 + k))
        k += 1


def _as_fraction(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _interval_decimal(lo: Fraction, hi: Fraction, digits: int) -> CertifiedDecimal | None:
    ends = (lo.numerator, lo.denominator), (hi.numerator, hi.denominator)
    if not _same_truncation(*ends, digits):
        return None
    return CertifiedDecimal(_render(lo.numerator, lo.denominator, digits), -digits)


def _mp_fraction(x: mpmath.mpf) -> Fraction:
    man, exp = mpmath.mpf(x).man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp)


def _bessel_interval(nu: Fraction, x: Fraction, guard: int) -> tuple[Fraction, Fraction]:
    """Enclosure of ``I_nu(x)`` with relative width about ``10**-guard``."""
    if nu.denominator == 1 and nu < 0:
        nu = -nu
    rel = Fraction(1, 10**guard)
    if nu.denominator == 1:
        s, tail = _hypergeometric_sum(nu, x * x / 4, rel)
        pref = (x / 2) ** int(nu) / math.factorial(int(nu))
        return pref * (s - tail), pref * (s + tail)
    if nu > -1:
        s, tail = _hypergeometric_sum(nu, x * x / 4, rel)
        with mpmath.workdps(guard + 15):
            pref = mpmath.power(mpmath.mpf(x.numerator) / x.denominator / 2, mpmath.mpf(nu.numerator) / nu.denominator)
            pref = pref / mpmath.gamma(mpmath.mpf(nu.numerator) / nu.denominator + 1)
            pf = _mp_fraction(pref)
        slack = abs(pf) * Fraction(1, 10 ** (guard + 5))
        ends = [(pf - slack) * (s - tail), (pf - slack) * (s + tail), (pf + slack) * (s - tail), (pf + slack) * (s + tail)]
        return min(ends), max(ends)
    if nu.denominator == 2:
        # I_{v} = I_{v+2} + (2 (v+1) / x) I_{v+1}, stepping down from orders above -1
        a_lo, a_hi = _bessel_interval(nu + 2, x, guard + 5)
        b_lo, b_hi = _bessel_interval(nu + 1, x, guard + 5)
        c = 2 * (nu + 1) / x
        prods = (c * b_lo, c * b_hi)
        return a_lo + min(prods), a_hi + max(prods)
    raise DomainError(f"order {nu} not supported (need nu > -1, an integer, or a half-integer)")


def bessel_I(order, x, digits: int) -> CertifiedDecimal:
    """Modified Bessel function ``I_order(x)`` for rational ``x > 0``.

    Integer orders are summed in exact rational arithmetic; other orders
    above -1 take the ``(x/2)^nu / Gamma(nu+1)`` prefactor from mpmath with
    guard digits; half-integer orders below -1 use the downward recurrence.
    """
    nu, x = _as_fraction(order), _as_fraction(x)
    if x <= 0:
        raise DomainError("argument must be positive")
    if digits < 1:
        raise DomainError("digits must be >= 1")
    guard = digits + 10
    while True:
        lo, hi = _bessel_interval(nu, x, guard)
        out = _interval_decimal(lo, hi, digits)
        if out is not None:
            return out
        guard += 20


def ap_cf_value(A, D, digits: int) -> CertifiedDecimal:
    """Value of ``[A; A+D, A+2D, …]`` through the ratio ``I_{A/D-1}(2/D) / I_{A/D}(2/D)``.

    The Bessel prefactors cancel, leaving ``(A/D) * D * S(A/D - 1) / S(A/D)``
    with ``S(v) = sum_k D^(-2k) / (k! (v+1)_k)``, so the whole computation is
    exact rational arithmetic plus tail bounds.
    """
    A, D = _as_fraction(A), _as_fraction(D)
    if A <= 0 or D <= 0:
        raise DomainError("A and D must be positive")
    if digits < 1:
        raise DomainError("digits must be >= 1")
    nu = A / D
    y = 1 / (D * D)
    scale = nu * D  # = 2 nu / x with x = 2/D
    guard = digits + 10
    while True:
        rel = Fraction(1, 10**guard)
        num, num_tail = _hypergeometric_sum(nu - 1, y, rel)
        den, den_tail = _hypergeometric_sum(nu, y, rel)
        lo = scale * (num - num_tail) / (den + den_tail)
        hi = scale * (num + num_tail) / (den - den_tail)
        out = _interval_decimal(lo, hi, digits)
        if out is not None:
            return out
        guard += 20


__all__ = [
    "ArithmeticQuotients",
    "ConstantQuotients",
    "ContinuedFraction",
    "ConvergentPair",
    "EXACT",
    "EvaluationResult",
    "ExpansionResult",
    "FactorialQuotients",
    "FibonacciQuotients",
    "StreamExhausted",
    "ap_cf_value",
    "bessel_I",
    "champernowne",
    "convergents",
    "denominators",
    "evaluate",
    "expand_interval",
    "expand_real",
    "iter_convergents",
    "max_certified_places",
    "read_digit_file",
    "round_decimal",
]
