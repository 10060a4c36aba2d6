import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from primefrac.exactnum import (
    EXACT,
    CertifiedDecimal,
    DecimalParseError,
    DomainError,
    big_ln,
    decimal_length,
    from_decimal,
    ratio_ln,
    reduce,
    round_scaled,
    to_certified_decimal,
    truncate_scaled,
)

from oracles import truncate


def test_reduce_sign_and_gcd():
    r = reduce(-20993638525 * 3, 46137348479 * 3)
    assert r == Fraction(-20993638525, 46137348479)
    assert r.denominator > 0
    assert reduce(6, -4) == Fraction(-3, 2)


def test_reduce_zero_denominator():
    with pytest.raises(DomainError):
        reduce(1, 0)


def test_known_rendering():
    cd = to_certified_decimal(Fraction(20993638525, 46137348479), 50)
    assert len(cd.digits) == 52
    assert cd.digits.startswith("0.45502481649017002236904815780104943208476833196")
    assert cd.certified_exponent == -50


def test_terminating_is_exact():
    cd = to_certified_decimal(Fraction(1, 8), 10)
    assert cd.exact and cd.certified_exponent == EXACT
    assert cd.digits == "0.1250000000"
    assert cd.certified_digits is None


def test_one_third_truncates():
    assert to_certified_decimal(Fraction(1, 3), 10).digits == "0.3333333333"
    assert to_certified_decimal(Fraction(2, 3), 5).digits == "0.66666"


def test_negative_small_value_keeps_sign():
    assert to_certified_decimal(Fraction(-1, 1000), 2).digits == "-0.00"


@given(st.fractions(), st.integers(1, 60))
def test_truncation_matches_oracle(r, places):
    cd = to_certified_decimal(r, places)
    if r >= 0:
        assert cd.digits == truncate(r, places)
    assert abs(from_decimal(cd.digits) - r) < Fraction(1, 10**places)


@given(st.fractions(), st.integers(1, 40))
def test_roundtrip_within_error(r, places):
    cd = to_certified_decimal(r, places)
    back = cd.to_fraction()
    if cd.exact:
        assert back == r
    else:
        assert abs(back - r) <= Fraction(10) ** int(cd.certified_exponent)


@given(st.integers(-10**30, 10**30), st.integers(1, 10**20), st.integers(0, 30))
def test_round_scaled_is_nearest(num, den, places):
    got = round_scaled(num, den, places)
    exact = Fraction(num * 10**places, den)
    assert abs(got - exact) <= Fraction(1, 2)
    assert truncate_scaled(num, den, places) == int(exact)  # int() truncates toward zero


def test_round_half_away_from_zero():
    assert round_scaled(5, 100, 1) == 1
    assert round_scaled(-5, 100, 1) == -1
    assert round_scaled(4, 100, 1) == 0


@pytest.mark.parametrize(
    "text,value",
    [
        ("0.5", Fraction(1, 2)),
        ("-12.25", Fraction(-49, 4)),
        (".25", Fraction(1, 4)),
        ("7", Fraction(7)),
        ("4.3e-2", Fraction(43, 1000)),
        ("0.12 34\n56", Fraction(123456, 10**6)),
    ],
)
def test_from_decimal(text, value):
    assert from_decimal(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1.2.3", "--1", "1e", "."])
def test_from_decimal_rejects(text):
    with pytest.raises(DecimalParseError):
        from_decimal(text)


def test_parse_error_position():
    with pytest.raises(DecimalParseError) as info:
        from_decimal("0.123x45")
    assert info.value.position == 5


def test_big_ln_huge_power():
    n = 2**10**6 - 1
    assert big_ln(n) == pytest.approx(10**6 * math.log(2), rel=1e-15)
    assert big_ln(10**5000) == pytest.approx(5000 * math.log(10), rel=1e-14)


@given(st.integers(1, 2**200))
def test_big_ln_matches_math_log(n):
    assert big_ln(n) == pytest.approx(math.log(n), rel=1e-14, abs=1e-15)


def test_big_ln_domain():
    with pytest.raises(DomainError):
        big_ln(0)
    with pytest.raises(DomainError):
        ratio_ln(Fraction(-1, 2))


def test_ratio_ln():
    assert ratio_ln(Fraction(10**400, 3)) == pytest.approx(400 * math.log(10) - math.log(3))


@given(st.integers(0, 10**500))
def test_decimal_length(n):
    assert decimal_length(n) == len(str(n))


def test_scientific_rendering():
    cd = CertifiedDecimal("0.0434132458", -10)
    assert cd.scientific(5) == "4.3413e-2"
    with pytest.raises(DomainError):
        cd.scientific(10)
    assert CertifiedDecimal("12.5", EXACT).scientific(5) == "1.2500e1"


def test_prefix():
    cd = CertifiedDecimal("0.123456", -6)
    assert cd.prefix(3) == "0.123"
    assert cd.prefix(0) == "0"
