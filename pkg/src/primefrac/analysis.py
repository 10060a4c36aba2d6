"""Diagnostics and predictions built on the exact continued-fraction engine.

Profiles (Khinchin means, Levy roots, approximation exponents, Sondow's
irrationality-measure estimates) are computed from exact integers through
``big_ln``, so they work for denominators with millions of digits.  The
predictors compare Hardy-Littlewood style formulas against counts produced by
the primes module, never against hard-coded numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Sequence

import mpmath
import numpy as np
from scipy import integrate

from .cfrac import ContinuedFraction, evaluate, iter_convergents
from .exactnum import (
    CertifiedDecimal,
    DomainError,
    big_ln,
    decimal_length,
    ratio_ln,
    render_scaled,
    truncate_scaled,
)
from .primes import (
    Kind,
    PrimeFamily,
    chebyshev_theta,
    count_family,
    family_quotients,
    first_gap_occurrence,
    iter_primorial_primes,
    sieve_primes,
)

# Reference literals (50 places).  mpmath reproduces both; tests check that.
EULER_GAMMA_50 = "0.57721566490153286060651209008240243104215933593992"
PI_50 = "3.14159265358979323846264338327950288419716939937510"

_E_NEG_GAMMA = math.exp(-float(EULER_GAMMA_50))
_CLOSED_FORM_MAX_DIGITS = 10_000


class PrecisionError(DomainError):
    """The supplied value is not precise enough for the requested profile."""

    def __init__(self, message: str, digits_needed: int):
        super().__init__(message)
        self.digits_needed = digits_needed


@dataclass(frozen=True)
class ProfileSeries:
    """``points`` are ``(n, value)`` with strictly increasing ``n``.

    ``skipped`` lists indices left out because the statistic is undefined
    there; ``companion`` carries a second series over the same indices when
    an operation computes two forms of one quantity.
    """

    label: str
    points: tuple[tuple[int, float], ...]
    skipped: tuple[int, ...] = ()
    companion: tuple[tuple[int, float], ...] = ()
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        idx = [n for n, _ in self.points]
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("profile indices must be strictly increasing")
        if not all(math.isfinite(v) for _, v in self.points):
            raise ValueError("profile values must be finite")

    @property
    def indices(self) -> list[int]:
        return [n for n, _ in self.points]

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.points]

    def at(self, n: int) -> float:
        for k, v in self.points:
            if k == n:
                return v
        raise KeyError(n)

    def __len__(self):
        return len(self.points)


# ---------------------------------------------------------------- profiles


def khinchin_profile(quotients: Sequence[int], up_to: int) -> ProfileSeries:
    """``K(k) = (a1 a2 ... ak)^(1/k)`` for ``k = 1..up_to``."""
    if up_to > len(quotients):
        raise DomainError(f"need {up_to} quotients, have {len(quotients)}")
    total = 0.0
    pts = []
    for k in range(1, up_to + 1):
        total += big_ln(int(quotients[k - 1]))
        pts.append((k, math.exp(total / k)))
    return ProfileSeries("khinchin", tuple(pts))


def levy_profile(denominators: Sequence[int], up_to: int) -> ProfileSeries:
    """``Q_k^(1/k)`` for ``k = 1..up_to``; ``denominators[k]`` is ``Q_k`` (``Q_0 = 1``)."""
    if up_to >= len(denominators):
        raise DomainError(f"need Q_0..Q_{up_to}, have {len(denominators)} denominators")
    pts = [(k, math.exp(big_ln(denominators[k]) / k)) for k in range(1, up_to + 1)]
    return ProfileSeries("levy", tuple(pts))


def _certified_rational(U: CertifiedDecimal) -> tuple[Fraction, Fraction]:
    """``(value, error bound)`` using only the certified places of ``U``."""
    if U.exact:
        return U.to_fraction(), Fraction(0)
    places = U.certified_digits or 0
    return CertifiedDecimal(U.prefix(places), U.certified_exponent).to_fraction(), Fraction(1, 10**places)


def delta_profile(U: CertifiedDecimal, convergents: Sequence[Fraction], up_to: int) -> ProfileSeries:
    """``delta(k) = -ln|U - P_k/Q_k| / ln Q_k`` for ``k = 1..up_to``.

    ``convergents[k-1]`` is ``P_k/Q_k``.  Raises :class:`PrecisionError` unless
    the error of ``U`` is below ``1e-10`` times every distance in range.
    Points with ``Q_k = 1`` are skipped (the exponent is undefined).
    """
    if up_to > len(convergents):
        raise DomainError(f"need {up_to} convergents, have {len(convergents)}")
    u, err = _certified_rational(U)
    diffs = [abs(u - c) for c in convergents[:up_to]]
    smallest = min(diffs)
    if smallest == 0 or err * 10**10 >= smallest:
        need = decimal_length(smallest.denominator) + 10 if smallest else None
        raise PrecisionError(
            f"U carries {U.certified_digits} certified places; about {need} are needed "
            f"to resolve |U - P/Q| down to 1e-{need - 10 if need else '?'}",
            need or 0,
        )
    pts, skipped = [], []
    for k, (c, d) in enumerate(zip(convergents, diffs), start=1):
        if k > up_to:
            break
        if c.denominator == 1:
            skipped.append(k)
            continue
        pts.append((k, -ratio_ln(d) / big_ln(c.denominator)))
    return ProfileSeries("delta", tuple(pts), tuple(skipped))


def delta_digits_needed(cf: ContinuedFraction, up_to: int) -> int:
    """Certified places of U required for ``delta_profile`` up to ``up_to``."""
    q_next = None
    for pair in iter_convergents(cf):
        if pair.index == up_to + 1:
            q_next = pair.q
            break
    if q_next is None:
        raise DomainError(f"continued fraction has fewer than {up_to + 1} quotients")
    return 2 * decimal_length(q_next) + 20


def delta_for(cf: ContinuedFraction, up_to: int) -> ProfileSeries:
    """Evaluate U at the precision ``delta_profile`` needs, then profile it."""
    digits = delta_digits_needed(cf, up_to)
    res = evaluate(cf, digits)
    if res.certified_digits < digits:
        raise PrecisionError(
            f"the stream certifies {res.certified_digits} places but {digits} are needed for n <= {up_to}",
            digits,
        )
    convs = [pair.value for pair in _pairs(cf, up_to)]
    return delta_profile(res.value, convs, up_to)


def _pairs(cf: ContinuedFraction, up_to: int):
    out = []
    for pair in iter_convergents(cf):
        if pair.index == 0:
            continue
        if pair.index > up_to:
            break
        out.append(pair)
    return out


@dataclass(frozen=True)
class ApproximationQuality:
    """Per convergent: is ``|U - P/Q|`` below ``1/(2Q^2)`` and ``1/(sqrt5 Q^2)``?"""

    index: int
    within_half: bool
    within_sqrt5: bool


def approximation_quality(U: CertifiedDecimal, convergents: Sequence[Fraction], up_to: int) -> list[ApproximationQuality]:
    u, err = _certified_rational(U)
    out = []
    for k, c in enumerate(convergents[:up_to], start=1):
        d = abs(u - c)
        if d == 0 or err * 10**10 >= d:
            raise PrecisionError(f"U is too coarse to judge convergent {k}", 0)
        q2 = c.denominator**2
        out.append(ApproximationQuality(k, 2 * d * q2 < 1, 5 * (d * q2) ** 2 < 1))
    return out


def windows_hold(flags: Sequence[bool], width: int) -> bool:
    """True when every run of ``width`` consecutive flags contains a True."""
    return all(any(flags[i : i + width]) for i in range(len(flags) - width + 1))


def sondow_mu(quotients: Sequence[int], denominators: Sequence[int], up_to: int) -> ProfileSeries:
    """``mu_k = 2 + ln a_{k+1} / ln Q_k``, with ``1 + ln Q_{k+1} / ln Q_k`` as companion.

    ``quotients[i]`` is ``a_{i+1}``; ``denominators[k]`` is ``Q_k``.  The two
    forms differ by ``ln(1 + Q_{k-1}/(a_{k+1} Q_k)) / ln Q_k``, which vanishes
    only in the limit; indices with ``Q_k = 1`` are skipped.
    """
    if up_to < 2:
        raise DomainError("sondow_mu needs up_to >= 2")
    if up_to + 1 >= len(denominators) or up_to + 1 > len(quotients):
        raise DomainError(f"need a_1..a_{up_to + 1} and Q_0..Q_{up_to + 1}")
    pts, alt, skipped = [], [], []
    for k in range(1, up_to + 1):
        lq = big_ln(denominators[k])
        if lq == 0.0:
            skipped.append(k)
            continue
        pts.append((k, 2.0 + big_ln(int(quotients[k])) / lq))
        alt.append((k, 1.0 + big_ln(denominators[k + 1]) / lq))
    return ProfileSeries("mu", tuple(pts), tuple(skipped), companion=tuple(alt))


def transcendence_statistics(kind: str, denominators: Sequence[int], up_to: int, start: int = 1) -> ProfileSeries:
    """Growth statistics of ``Q_n`` used by transcendence criteria.

    ``davenport_roth``: ``sqrt(ln n) ln ln Q_n / n``.
    ``adamczewski_bugeaud``: the printed expression
    ``ln ln Q / (n^(2/3) (ln Q)^(2/3) ln ln Q)``, taken literally and flagged.
    ``mersenne_bound``: 1.0 where ``Q_n > 2^(c 2^((n+1) e^-gamma))`` holds, else 0.0.
    Points where ``ln ln Q_n`` is undefined or non-positive are skipped.
    """
    pts, skipped, flags = [], [], []
    if kind == "mersenne_bound":
        c = _mersenne_c()
        for n in range(start, up_to + 1):
            exponent = c * 2.0 ** ((n + 1) * _E_NEG_GAMMA)
            pts.append((n, 1.0 if big_ln(denominators[n]) > exponent * math.log(2) else 0.0))
        return ProfileSeries("mersenne_bound", tuple(pts))
    if kind not in ("davenport_roth", "adamczewski_bugeaud"):
        raise DomainError(f"unknown statistic {kind!r}")
    for n in range(max(start, 1), up_to + 1):
        lq = big_ln(denominators[n])
        if lq <= 1.0:
            skipped.append(n)
            continue
        llq = math.log(lq)
        if kind == "davenport_roth":
            pts.append((n, math.sqrt(math.log(n)) * llq / n))
        else:
            pts.append((n, llq / (n ** (2 / 3) * lq ** (2 / 3) * llq)))
    if kind == "adamczewski_bugeaud":
        flags.append("printed-form: log log Q cancels between numerator and denominator")
    label = "dr_stat" if kind == "davenport_roth" else "ab_stat"
    return ProfileSeries(label, tuple(pts), tuple(skipped), flags=tuple(flags))


# ---------------------------------------------------------------- constants


@dataclass(frozen=True)
class ConstantEntry:
    name: str
    value: CertifiedDecimal
    provenance: str
    error: float


def _mp_truncated(x: mpmath.mpf, digits: int) -> CertifiedDecimal:
    man, exp = mpmath.mpf(x).man_exp
    r = Fraction(int(man)) * Fraction(2) ** int(exp)
    scaled = truncate_scaled(r.numerator, r.denominator, digits)
    return CertifiedDecimal(render_scaled(scaled, digits, negative=r < 0 and scaled == 0), -digits)


def _closed_form(name: str, digits: int) -> CertifiedDecimal:
    if digits > _CLOSED_FORM_MAX_DIGITS:
        raise DomainError(f"{name}: at most {_CLOSED_FORM_MAX_DIGITS} digits are supported")
    with mpmath.workdps(digits + 20):
        if name == "L0":
            x = mpmath.exp(mpmath.pi**2 / (12 * mpmath.log(2)))
        elif name == "CFI":
            x = 4 / (3 * mpmath.agm(1, mpmath.sqrt(2)))
        elif name == "mR":
            x = (1 - mpmath.exp(-2)) / 2
        elif name == "c":
            x = 1 / (mpmath.power(2, mpmath.exp(-mpmath.euler)) - 1)
        elif name == "gamma":
            x = +mpmath.euler
        elif name == "pi":
            x = +mpmath.pi
        else:
            raise DomainError(f"unknown constant {name!r}")
        return _mp_truncated(x, digits)


def _mersenne_c() -> float:
    return 1.0 / (2.0**_E_NEG_GAMMA - 1.0)


def khinchin_partial(cutoff: int = 10**7) -> tuple[float, float]:
    """K0 from ``r <= cutoff`` plus an integral tail; returns ``(value, error bound)``."""
    r = np.arange(1, cutoff + 1, dtype=np.float64)
    head = float(np.sum(np.log2(r) * np.log1p(1.0 / (r * (r + 2.0)))))
    m = cutoff + 0.5
    tail = (math.log(m) + 1.0) / (m * math.log(2))
    value = math.exp(head + tail)
    # log1p(1/(r(r+2))) = 1/r^2 - 2/r^3 + ...; the dropped part is below 2 log2(N)/N^2
    err = value * 3.0 * math.log2(cutoff) / cutoff**2 + value * 1e-14
    return value, err


def twin_constant_partial(cutoff: int = 10**6) -> tuple[float, float]:
    """C2 from odd primes ``<= cutoff``; ``(value, error bound)``.

    The partial product is an upper bound; the true value is at least
    ``value * (1 - 1/(2(N-1)))`` since ``sum_{p > N} 1/(p-1)^2 < 1/(2(N-1))``.
    """
    ps = sieve_primes(cutoff)[1:].astype(np.float64)
    value = 2.0 * math.exp(float(np.sum(np.log1p(-1.0 / (ps - 1.0) ** 2))))
    return value, value / (2.0 * (cutoff - 1))


def quadratic_constant_partial(cutoff: int = 10**7) -> tuple[float, float]:
    """C_q = prod over odd p of ``1 - (-1/p)/(p-1)``; ``(value, heuristic error)``.

    Convergence is conditional.  The error figure ``2/(sqrt(N) ln N)`` is
    twice the observed oscillation at desk cutoffs, not a proof.
    """
    ps = sieve_primes(cutoff)[1:].astype(np.float64)
    chi = np.where(ps % 4 == 1, 1.0, -1.0)
    value = math.exp(float(np.sum(np.log1p(-chi / (ps - 1.0)))))
    return value, 2.0 / (math.sqrt(cutoff) * math.log(cutoff))


_PARTIALS = {
    "K0": (khinchin_partial, 10**7),
    "C2": (twin_constant_partial, 10**6),
    "Cq": (quadratic_constant_partial, 10**7),
}

CONSTANT_NAMES = ("K0", "L0", "C2", "Cq", "CFI", "gamma", "mR", "c", "pi")


def math_constants(name: str, digits: int, cutoff: int | None = None) -> CertifiedDecimal:
    """The named constant to ``digits`` places.

    Closed forms (L0, CFI, mR, c, gamma, pi) go through mpmath.  K0, C2 and
    C_q are partial products; asking for more places than the cutoff
    supports raises ``DomainError`` naming the achievable count.  For those
    the guarantee is ``|true - value| <= 10**certified_exponent``.
    """
    if digits < 1:
        raise DomainError("digits must be >= 1")
    if name not in _PARTIALS:
        return _closed_form(name, digits)
    fn, default = _PARTIALS[name]
    value, err = fn(cutoff or default)
    achievable = max(0, math.floor(-math.log10(err)))
    if digits > achievable:
        raise DomainError(f"{name}: only {achievable} digits are achievable at cutoff {cutoff or default}")
    scaled = round(value * 10**digits)
    return CertifiedDecimal(render_scaled(scaled, digits), -digits)


def constants_table(digits: int = 30) -> dict[str, ConstantEntry]:
    out = {}
    for name in CONSTANT_NAMES:
        if name in _PARTIALS:
            fn, cutoff = _PARTIALS[name]
            value, err = fn(cutoff)
            places = max(1, math.floor(-math.log10(err)))
            out[name] = ConstantEntry(name, math_constants(name, places), f"partial product, cutoff {cutoff}", err)
        else:
            out[name] = ConstantEntry(name, math_constants(name, digits), "closed form", 10.0**-digits)
    return out


# ---------------------------------------------------------------- predictors


@dataclass(frozen=True)
class PredictorComparison:
    family: str
    x: int
    predicted: float
    actual: int
    closed_form: float | None = None

    @property
    def ratio(self) -> float:
        return self.predicted / self.actual if self.actual else math.inf


def inverse_log2_integral(x: float) -> float:
    """``int_2^x du / ln(u)^2``."""
    val, _ = integrate.quad(lambda u: 1.0 / math.log(u) ** 2, 2.0, x, epsabs=0, epsrel=1e-11, limit=200)
    return val


def li(x: float) -> float:
    """Offset logarithmic integral ``int_2^x du / ln u``."""
    val, _ = integrate.quad(lambda u: 1.0 / math.log(u), 2.0, x, epsabs=0, epsrel=1e-11, limit=200)
    return val


_C2 = 1.32032363169373914785562422
_CQ = 1.37281346281824600911219269
_CFI = float(4 / (3 * mpmath.agm(1, mpmath.sqrt(2))))


def hl_predictor(family: str, x: int) -> PredictorComparison:
    """Conjectured count of ``family`` members up to ``x`` next to the actual count.

    ``twin`` predicts pairs with ``C2 int_2^x du/ln^2 u`` (``C2 x/ln^2 x`` as
    the closed form), ``m2p1`` predicts ``C_q sqrt(x)/ln x`` and ``fi``
    predicts ``C_FI x^(3/4)/ln x`` representations.
    """
    if x < 100:
        raise DomainError("x must be at least 100")
    lx = math.log(x)
    if family == "twin":
        actual = count_family(PrimeFamily.twin(x), x).pairs
        return PredictorComparison(family, x, _C2 * inverse_log2_integral(x), actual, _C2 * x / lx**2)
    if family == "m2p1":
        actual = count_family(PrimeFamily.m2p1(x), x).distinct
        return PredictorComparison(family, x, _CQ * math.sqrt(x) / lx, actual)
    if family == "fi":
        actual = count_family(PrimeFamily(Kind.FRIEDLANDER_IWANIEC, x), x).representations
        return PredictorComparison(family, x, _CFI * x**0.75 / lx, actual)
    raise DomainError(f"no predictor for family {family!r}")


@dataclass(frozen=True)
class GapPrediction:
    d: int
    shanks: float
    wolf: float
    ud_approx: float
    first_occurrence: int | None = None
    ud_actual: float | None = None


def gap_predictors(d: int, limit: int | None = 10**7) -> GapPrediction:
    """Shanks ``e^sqrt(d)``, Wolf's formula and the two-term ``u_d`` guess.

    With ``limit`` set, the first occurrence of gap ``d`` and ``u_d`` from the
    primes up to ``limit`` are included when they exist.
    """
    if d < 2 or d % 2:
        raise DomainError("d must be even and >= 2")
    sd = math.sqrt(d)
    shanks = math.exp(sd)
    wolf = sd * math.exp(0.5 * math.sqrt(math.log(d) ** 2 + 4 * d))
    a1 = sd * math.exp(sd)
    ud_approx = 1.0 / (a1 + 1.0 / (a1 + d))
    first = ud = None
    if limit:
        rec = first_gap_occurrence(d, limit)
        if rec is not None:
            first = rec.lower
            stream = family_quotients(PrimeFamily.dtwin(d, limit))
            res = evaluate(ContinuedFraction.from_stream(stream), 20)
            ud = float(res.convergent)
    return GapPrediction(d, shanks, wolf, ud_approx, first, ud)


@dataclass(frozen=True)
class WagstaffFit:
    slope: float
    intercept: float
    theoretical_slope: float
    count: int


def load_mersenne_exponents() -> list[int]:
    text = resources.files("primefrac").joinpath("data/mersenne_exponents.txt").read_text()
    return [int(line) for line in text.split("\n") if line.strip() and not line.startswith("#")]


def wagstaff_fit(exponents: Sequence[int] | None = None) -> WagstaffFit:
    """Least-squares line through ``(n, ln p_n)``.

    ``ln p_n`` is ``ln log2 M_n`` to within ``2^-p_n``; the matching
    theoretical slope is ``e^-gamma ln 2``.
    """
    if exponents is None:
        exponents = load_mersenne_exponents()
    if len(exponents) < 3:
        raise DomainError("need at least 3 exponents")
    n = np.arange(1, len(exponents) + 1, dtype=np.float64)
    y = np.log(np.asarray(exponents, dtype=np.float64))
    slope, intercept = np.polyfit(n, y, 1)
    return WagstaffFit(float(slope), float(intercept), _E_NEG_GAMMA * math.log(2), len(exponents))


# ---------------------------------------------------------------- primorial growth


def prime_sum_check(n: int) -> PredictorComparison:
    """``sum_{p <= n} p`` next to ``li(n^2)``."""
    if n < 2:
        raise DomainError("n must be at least 2")
    actual = int(sieve_primes(n).astype(np.int64).sum())
    return PredictorComparison("prime-sum", n, li(float(n) ** 2), actual)


@dataclass(frozen=True)
class PrimorialGrowthRow:
    n: int
    r: int
    r_formula: float
    ln_primorial: float
    ln_primorial_formula: float
    ratio_to_mersenne: float | None
    ratio_formula: float


def primorial_growth_check(n: int, sign: int = 1, max_r: int = 1021) -> list[PrimorialGrowthRow]:
    """Compare the first ``n`` primorial primes ``r# + sign`` with the growth formulas.

    ``ratio_to_mersenne`` is ``ln(r_k#) / ln(M_k)`` against the k-th Mersenne
    prime; ``ratio_formula`` is the same ratio from the two asymptotic forms.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    mers = load_mersenne_exponents()
    rows = []
    ln2 = math.log(2)
    for k, (r, _) in enumerate(iter_primorial_primes(max_r, sign), start=1):
        if k > n:
            break
        ln_prim = chebyshev_theta(r)
        ln_formula = math.exp(2 * _E_NEG_GAMMA * k) / (2 * k)
        mersenne_ln = mers[k - 1] * ln2 if k <= len(mers) else None
        rows.append(
            PrimorialGrowthRow(
                k,
                r,
                math.exp(k * _E_NEG_GAMMA),
                ln_prim,
                ln_formula,
                ln_prim / mersenne_ln if mersenne_ln else None,
                ln_formula / (ln2 * 2.0 ** (k * _E_NEG_GAMMA)),
            )
        )
    return rows


__all__ = [
    "ApproximationQuality",
    "CONSTANT_NAMES",
    "ConstantEntry",
    "EULER_GAMMA_50",
    "GapPrediction",
    "PI_50",
    "PrecisionError",
    "PredictorComparison",
    "PrimorialGrowthRow",
    "ProfileSeries",
    "WagstaffFit",
    "approximation_quality",
    "constants_table",
    "delta_digits_needed",
    "delta_for",
    "delta_profile",
    "gap_predictors",
    "hl_predictor",
    "inverse_log2_integral",
    "khinchin_partial",
    "khinchin_profile",
    "levy_profile",
    "li",
    "load_mersenne_exponents",
    "math_constants",
    "prime_sum_check",
    "primorial_growth_check",
    "quadratic_constant_partial",
    "sondow_mu",
    "transcendence_statistics",
    "twin_constant_partial",
    "wagstaff_fit",
]
