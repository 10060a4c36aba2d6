"""Exact rational substrate and decimal rendering.

Integers are plain Python ``int`` and exact ratios are ``fractions.Fraction``.
What this module adds is truncated decimal rendering with an explicit error
exponent, a strict decimal parser, and a logarithm for integers far too large
to convert to ``float``.
"""
from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

# Convergents for the prime constants run to tens of thousands of digits.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

EXACT = -math.inf  # certified_exponent of a value rendered without error

_LN2 = math.log(2.0)
_TOP_BITS = 128


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class DecimalParseError(ValueError):
    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        super().__init__(f"{reason} at position {position} in {text[:40]!r}")


@dataclass(frozen=True)
class CertifiedDecimal:
    """A decimal string together with a proven error exponent.

    ``|true - value| <= 10**certified_exponent``, and every digit after the
    point up to position ``-certified_exponent`` coincides with the digit of
    the true value's truncated expansion.  Digits past that position may be
    present but are not certified.
    """

    digits: str
    certified_exponent: float

    @property
    def exact(self) -> bool:
        return self.certified_exponent == EXACT

    @property
    def certified_digits(self) -> int | None:
        """Number of certified places after the decimal point (None if exact)."""
        if self.exact:
            return None
        return max(0, -int(self.certified_exponent))

    def to_fraction(self) -> Fraction:
        return from_decimal(self.digits)

    def prefix(self, places: int) -> str:
        """The rendered string cut to ``places`` digits after the point."""
        head, _, tail = self.digits.partition(".")
        if places <= 0:
            return head
        return head + "." + tail[:places]

    def scientific(self, significant: int) -> str:
        """Render as ``d.ddd…e-k`` with ``significant`` certified digits.

        Raises ``DomainError`` when fewer significant digits are certified.
        """
        sign = ""
        text = self.digits
        if text.startswith("-"):
            sign, text = "-", text[1:]
        head, _, tail = text.partition(".")
        stripped = head.lstrip("0")
        if stripped:
            exponent = len(stripped) - 1
            mantissa = stripped + tail
            lead = 0
        else:
            lead = len(tail) - len(tail.lstrip("0"))
            if lead == len(tail):
                raise DomainError("value has no nonzero digit in its rendering")
            exponent = -(lead + 1)
            mantissa = tail[lead:]
        needed_places = lead + significant if not stripped else significant - len(stripped)
        if not self.exact and needed_places > (self.certified_digits or 0):
            raise DomainError(
                f"only {self.certified_digits} places certified, "
                f"{needed_places} needed for {significant} significant digits"
            )
        if len(mantissa) < significant:
            mantissa = mantissa + "0" * (significant - len(mantissa))
        mantissa = mantissa[:significant]
        return f"{sign}{mantissa[0]}.{mantissa[1:]}e{exponent}"

    def __str__(self) -> str:
        return self.digits


def reduce(numerator: int, denominator: int) -> Fraction:
    """Reduced ratio with positive denominator; zero denominator is a domain error."""
    if denominator == 0:
        raise DomainError("zero denominator")
    return Fraction(numerator, denominator)


def truncate_scaled(numerator: int, denominator: int, places: int) -> int:
    """``trunc(numerator / denominator * 10**places)`` toward zero, exactly."""
    if denominator < 0:
        numerator, denominator = -numerator, -denominator
    scaled = abs(numerator) * 10**places // denominator
    return -scaled if numerator < 0 else scaled


def round_scaled(numerator: int, denominator: int, places: int) -> int:
    """``numerator / denominator * 10**places`` rounded half away from zero."""
    if denominator < 0:
        numerator, denominator = -numerator, -denominator
    scaled = (2 * abs(numerator) * 10**places + denominator) // (2 * denominator)
    return -scaled if numerator < 0 else scaled


def render_scaled(value: int, places: int, negative: bool = False) -> str:
    """Format the integer ``value`` as a decimal with ``places`` digits after the point."""
    sign = "-" if (negative or value < 0) else ""
    value = abs(value)
    if places == 0:
        return f"{sign}{value}"
    body = str(value).rjust(places + 1, "0")
    return f"{sign}{body[:-places]}.{body[-places:]}"


def to_certified_decimal(r: Fraction, digits: int) -> CertifiedDecimal:
    """Truncated (not rounded) expansion of ``r`` to ``digits`` places.

    Terminating expansions that fit in ``digits`` places are flagged exact.
    """
    if digits < 1:
        raise DomainError("digits must be >= 1")
    r = Fraction(r)
    scaled = truncate_scaled(r.numerator, r.denominator, digits)
    negative = r < 0 and scaled == 0
    text = render_scaled(scaled, digits, negative=negative)
    exact = (r.numerator * 10**digits) % r.denominator == 0
    return CertifiedDecimal(text, EXACT if exact else -digits)


_DECIMAL_RE = re.compile(r"([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?")


def from_decimal(text: str) -> Fraction:
    """Exact value of a decimal numeral such as ``-12.5``, ``.25`` or ``4.3e-2``.

    Whitespace inside the numeral (line wrapping in digit files) is ignored.
    """
    cleaned = "".join(text.split())
    m = _DECIMAL_RE.fullmatch(cleaned)
    if m is None or not (m.group(2) or m.group(3)):
        pos = _first_bad_position(cleaned)
        raise DecimalParseError(text, pos, "malformed decimal numeral")
    sign, whole, frac, exp = m.groups()
    frac = frac or ""
    value = Fraction(int((whole or "0") + frac), 10 ** len(frac))
    if exp:
        value *= Fraction(10) ** int(exp)
    return -value if sign == "-" else value


def _first_bad_position(text: str) -> int:
    for end in range(len(text), -1, -1):
        if _DECIMAL_RE.fullmatch(text[:end]) and any(c.isdigit() for c in text[:end]):
            return end
    return 0


def big_ln(n: int) -> float:
    """Natural log of a positive integer of any size.

    Uses the exact bit length plus the leading 128 bits, so the relative
    error is at the level of double rounding regardless of magnitude.
    """
    if n <= 0:
        raise DomainError("logarithm of a non-positive integer")
    if n == 1:
        return 0.0
    shift = n.bit_length() - _TOP_BITS
    if shift <= 0:
        return math.log(n)
    top = n >> shift
    return math.log(float(top)) + shift * _LN2


def ratio_ln(r: Fraction) -> float:
    """Natural log of a positive rational via ``big_ln`` of its parts."""
    if r <= 0:
        raise DomainError("logarithm of a non-positive rational")
    return big_ln(r.numerator) - big_ln(r.denominator)


def decimal_length(n: int) -> int:
    """Number of decimal digits of ``|n|`` (1 for zero)."""
    n = abs(n)
    if n == 0:
        return 1
    guess = int(n.bit_length() * 0.30102999566398120) + 1
    if 10 ** (guess - 1) > n:
        guess -= 1
    elif 10**guess <= n:
        guess += 1
    return guess
