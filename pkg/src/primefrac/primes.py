"""Prime families used as partial quotients, plus the sieving and primality
machinery behind them."""
from __future__ import annotations

import enum
import functools
import math
import random
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .exactnum import DomainError

DEFAULT_SEGMENT_SIZE = 2**20  # odd entries per sieve segment

# Desk-scale ceilings; family generation stops here and reports the prefix.
MAX_SIEVE_LIMIT = 4 * 10**9
MAX_MERSENNE_EXPONENT = 5000
MAX_PRIMORIAL_BOUND = 3000

# Deterministic Miller-Rabin bases: correct for every n < 3.3e24, hence all 64-bit n.
U64_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


class ResourceLimitError(RuntimeError):
    """Generation hit a configured ceiling; ``partial`` holds the completed prefix."""

    def __init__(self, message: str, partial: "QuotientStream"):
        super().__init__(message)
        self.partial = partial


# ---------------------------------------------------------------- sieving


@functools.lru_cache(maxsize=8)
def _base_primes(limit: int) -> np.ndarray:
    """Primes <= limit by a plain (unsegmented) sieve; limit is small here."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    out = np.flatnonzero(flags).astype(np.int64)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class SieveSegment:
    """Odd numbers ``start, start+2, …`` below ``end``; ``bitmap[i]`` flags ``start + 2i``."""

    start: int
    end: int
    bitmap: np.ndarray = field(repr=False, compare=False)

    def primes(self) -> np.ndarray:
        idx = np.flatnonzero(self.bitmap).astype(np.uint64)
        return (np.uint64(self.start) + np.uint64(2) * idx).astype(_dtype_for(self.end))


def _dtype_for(limit: int):
    return np.int64 if limit < 2**63 else np.uint64


def iter_sieve_segments(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> Iterator[SieveSegment]:
    """Segments covering the odd numbers in ``[lo, hi]`` (2 is not included)."""
    if segment_size < 1:
        raise DomainError("segment_size must be positive")
    lo = max(lo, 3)
    if lo % 2 == 0:
        lo += 1
    if hi < lo:
        return
    base = _base_primes(math.isqrt(hi))
    odd_base = [int(p) for p in base[1:]]
    span = 2 * segment_size
    start = lo
    while start <= hi:
        end = min(start + span, hi + 1)  # exclusive
        count = (end - start + 1) // 2
        bitmap = np.ones(count, dtype=bool)
        for p in odd_base:
            pp = p * p
            if pp >= end:
                break
            first = max(pp, -(-start // p) * p)
            if first % 2 == 0:
                first += p
            if first < end:
                bitmap[(first - start) // 2 :: p] = False
        yield SieveSegment(start, end, bitmap)
        start = end if end % 2 == 1 else end + 1


def sieve_range(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> np.ndarray:
    """All primes ``p`` with ``lo <= p <= hi`` in ascending order."""
    parts = []
    if lo <= 2 <= hi:
        parts.append(np.array([2], dtype=_dtype_for(hi)))
    parts.extend(seg.primes() for seg in iter_sieve_segments(lo, hi, segment_size))
    if not parts:
        return np.zeros(0, dtype=_dtype_for(hi))
    return np.concatenate(parts)


@functools.lru_cache(maxsize=4)
def _cached_primes(limit: int, segment_size: int) -> np.ndarray:
    out = sieve_range(2, limit, segment_size)
    out.flags.writeable = False
    return out


def sieve_primes(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> np.ndarray:
    """Ascending primes ``<= limit`` (empty for ``limit < 2``).

    The result is cached and read-only; copy it before mutating.
    """
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    if limit >= 2**64:
        raise DomainError("limit must be below 2**64")
    return _cached_primes(int(limit), segment_size)


# ---------------------------------------------------------------- primality


def _mr_round(n: int, a: int, d: int, s: int) -> bool:
    """One Miller-Rabin round; False means ``a`` witnesses compositeness."""
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _split(n: int) -> tuple[int, int]:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    return d, s


def is_prime_u64(n: int) -> bool:
    """Exact primality for ``n < 2**64`` (and beyond, up to 3.3e24)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 97 * 97:
        return True
    d, s = _split(n)
    return all(_mr_round(n, a, d, s) for a in U64_WITNESSES)


def is_probable_prime(n: int, rounds: int = 32) -> bool:
    """Miller-Rabin with a reproducible witness rule.

    Inputs below 2**64 are decided exactly by :func:`is_prime_u64`.  Above
    that, base 2 is tried first and the remaining ``rounds - 1`` bases are drawn
    from ``random.Random(n)``, so the verdict for a given ``n`` never changes.
    Composite verdicts are certain; a prime verdict is wrong with probability
    at most ``4**-rounds``.
    """
    if rounds < 16:
        raise DomainError("at least 16 rounds are required")
    if n < 2**64:
        return is_prime_u64(n)
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return False
    d, s = _split(n)
    if not _mr_round(n, 2, d, s):
        return False
    rng = random.Random(n)
    return all(_mr_round(n, rng.randrange(3, n - 1), d, s) for _ in range(rounds - 1))


def lucas_lehmer(p: int) -> bool:
    """True iff ``2**p - 1`` is prime, for prime ``p``."""
    if p == 2:
        return True
    if p < 2 or p % 2 == 0 or not is_probable_prime(p):
        raise DomainError(f"Lucas-Lehmer needs an odd prime exponent, got {p}")
    m = (1 << p) - 1
    s = 4
    for _ in range(p - 2):
        s = s * s - 2
        # reduction mod 2**p - 1 without division
        s = (s & m) + (s >> p)
        if s >= m:
            s -= m
    return s == 0


# ---------------------------------------------------------------- families


class Kind(enum.Enum):
    ALL_PRIMES = "all-primes"
    TWIN = "twin"
    DTWIN = "dtwin"
    QUAD_M2P1 = "m2p1"
    FRIEDLANDER_IWANIEC = "fi"
    MERSENNE = "mersenne"
    PRIMORIAL_PLUS = "primorial-plus"
    PRIMORIAL_MINUS = "primorial-minus"


@dataclass(frozen=True)
class PrimeFamily:
    """A prime family plus its search bound.

    ``bound`` is a prime ceiling for the sieve-based kinds, an exponent
    ceiling for Mersenne, a ceiling on ``r`` for primorial primes, and either
    an ``(m_max, n_max)`` rectangle or a value ceiling for Friedlander-Iwaniec.
    """

    kind: Kind
    bound: int | tuple[int, int]
    d: int = 2

    def __post_init__(self):
        if self.kind is Kind.DTWIN and (self.d < 2 or self.d % 2):
            raise DomainError("gap d must be even and >= 2")
        bounds = self.bound if isinstance(self.bound, tuple) else (self.bound,)
        if any(b <= 0 for b in bounds):
            raise DomainError("bounds must be strictly positive")
        if isinstance(self.bound, tuple) and self.kind is not Kind.FRIEDLANDER_IWANIEC:
            raise DomainError("only the Friedlander-Iwaniec family takes a rectangle bound")

    @classmethod
    def all_primes(cls, limit: int) -> "PrimeFamily":
        return cls(Kind.ALL_PRIMES, limit)

    @classmethod
    def twin(cls, limit: int) -> "PrimeFamily":
        return cls(Kind.TWIN, limit, 2)

    @classmethod
    def dtwin(cls, d: int, limit: int) -> "PrimeFamily":
        return cls(Kind.DTWIN, limit, d)

    @classmethod
    def m2p1(cls, limit: int) -> "PrimeFamily":
        return cls(Kind.QUAD_M2P1, limit)

    @classmethod
    def friedlander_iwaniec(cls, m_max: int, n_max: int) -> "PrimeFamily":
        return cls(Kind.FRIEDLANDER_IWANIEC, (m_max, n_max))

    @classmethod
    def mersenne(cls, max_exponent: int) -> "PrimeFamily":
        return cls(Kind.MERSENNE, max_exponent)

    @classmethod
    def primorial(cls, sign: int, max_r: int) -> "PrimeFamily":
        return cls(Kind.PRIMORIAL_PLUS if sign > 0 else Kind.PRIMORIAL_MINUS, max_r)

    @property
    def gap(self) -> int:
        return 2 if self.kind is Kind.TWIN else self.d

    def describe(self) -> str:
        if self.kind is Kind.DTWIN:
            return f"dtwin(d={self.d})"
        return self.kind.value

    def bound_text(self) -> str:
        if isinstance(self.bound, tuple):
            return f"m<={self.bound[0]},n<={self.bound[1]}"
        return str(self.bound)


@dataclass(frozen=True)
class QuotientStream:
    family: PrimeFamily
    quotients: tuple[int, ...]
    provenance: str

    def __iter__(self):
        return iter(self.quotients)

    def __len__(self):
        return len(self.quotients)

    def __getitem__(self, i):
        return self.quotients[i]


_PROVENANCE = {
    Kind.ALL_PRIMES: "ascending primes <= {b}",
    Kind.TWIN: "consecutive prime pairs (p, p+2) with p+2 <= {b}; each pair emits p then p+2",
    Kind.DTWIN: "consecutive prime pairs (p, p+{d}) with p+{d} <= {b}; each pair emits p then p+{d}",
    Kind.QUAD_M2P1: "ascending primes m^2+1 <= {b}",
    Kind.FRIEDLANDER_IWANIEC: "primes m^2+n^4 over {b}, ascending, one entry per representation",
    Kind.MERSENNE: "2^p-1 passing Lucas-Lehmer, p <= {b}",
    Kind.PRIMORIAL_PLUS: "probable primes r#+1, prime r <= {b}",
    Kind.PRIMORIAL_MINUS: "probable primes r#-1, prime r <= {b}",
}


def provenance_for(family: PrimeFamily) -> str:
    return _PROVENANCE[family.kind].format(b=family.bound_text(), d=family.gap)


def _pair_quotients(limit: int, d: int) -> Iterator[int]:
    ps = sieve_primes(limit)
    hits = np.flatnonzero(np.diff(ps) == d)
    for i in hits.tolist():
        lower = int(ps[i])
        yield lower
        yield lower + d


def _m2p1_quotients(limit: int) -> Iterator[int]:
    for m in range(1, math.isqrt(limit - 1) + 1 if limit >= 2 else 1):
        q = m * m + 1
        if is_probable_prime(q):
            yield q


def _fi_values(m_max: int, n_max: int, ceiling: int | None = None) -> np.ndarray:
    """All ``m^2 + n^4`` over the rectangle (and under ``ceiling`` if given), with multiplicity."""
    m = np.arange(1, m_max + 1, dtype=np.int64)
    parts = []
    for n in range(1, n_max + 1):
        vals = m * m + n**4
        if ceiling is not None:
            vals = vals[vals <= ceiling]
        parts.append(vals)
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def _is_prime_array(values: np.ndarray, limit: int | None = None) -> np.ndarray:
    if values.size == 0:
        return np.zeros(0, dtype=bool)
    ps = sieve_primes(limit if limit is not None else int(values.max()))
    idx = np.searchsorted(ps, values)
    idx = np.minimum(idx, len(ps) - 1)
    return ps[idx] == values


def _fi_quotients(m_max: int, n_max: int) -> Iterator[int]:
    vals = _fi_values(m_max, n_max)
    primes = np.sort(vals[_is_prime_array(vals)])
    yield from (int(v) for v in primes)


def _mersenne_quotients(max_exponent: int) -> Iterator[int]:
    for p in sieve_primes(max_exponent).tolist():
        if lucas_lehmer(p):
            yield (1 << p) - 1


def iter_primorial_primes(max_r: int, sign: int) -> Iterator[tuple[int, int]]:
    """Pairs ``(r, r# + sign)`` for primes ``r <= max_r`` where ``r# + sign`` is a probable prime."""
    running = 1
    for r in sieve_primes(max_r).tolist():
        running *= r
        candidate = running + sign
        if candidate >= 2 and is_probable_prime(candidate):
            yield r, candidate


def _primorial_quotients(max_r: int, sign: int) -> Iterator[int]:
    for _, candidate in iter_primorial_primes(max_r, sign):
        yield candidate


def _ceiling_for(kind: Kind) -> int:
    if kind is Kind.MERSENNE:
        return MAX_MERSENNE_EXPONENT
    if kind in (Kind.PRIMORIAL_PLUS, Kind.PRIMORIAL_MINUS):
        return MAX_PRIMORIAL_BOUND
    return MAX_SIEVE_LIMIT


def iter_family(family: PrimeFamily) -> Iterator[int]:
    """Lazily emit the family's partial quotients in their fixed order."""
    kind, bound = family.kind, family.bound
    if kind is Kind.ALL_PRIMES:
        yield from (int(p) for p in sieve_primes(bound))
    elif kind in (Kind.TWIN, Kind.DTWIN):
        yield from _pair_quotients(bound, family.gap)
    elif kind is Kind.QUAD_M2P1:
        yield from _m2p1_quotients(bound)
    elif kind is Kind.FRIEDLANDER_IWANIEC:
        if isinstance(bound, tuple):
            yield from _fi_quotients(*bound)
        else:
            vals = _fi_values(math.isqrt(bound), int(bound**0.25) + 1, ceiling=bound)
            yield from (int(v) for v in np.sort(vals[_is_prime_array(vals, bound)]))
    elif kind is Kind.MERSENNE:
        yield from _mersenne_quotients(bound)
    else:
        yield from _primorial_quotients(bound, 1 if kind is Kind.PRIMORIAL_PLUS else -1)


def family_quotients(family: PrimeFamily, max_terms: int | None = None) -> QuotientStream:
    """Materialize the family's quotient stream.

    A bound above the desk-scale ceiling generates up to the ceiling and
    raises :class:`ResourceLimitError` carrying that prefix.
    """
    provenance = provenance_for(family)
    ceiling = _ceiling_for(family.kind)
    if isinstance(family.bound, tuple):
        m_max, n_max = family.bound
        over = m_max**2 + n_max**4 > ceiling
        capped = family
    else:
        over = family.bound > ceiling
        capped = PrimeFamily(family.kind, ceiling, family.d) if over else family
    out = []
    if not (over and capped is family):
        for q in iter_family(capped):
            if max_terms is not None and len(out) >= max_terms:
                break
            out.append(q)
    if over:
        raise ResourceLimitError(
            f"{family.describe()} bound {family.bound_text()} exceeds ceiling {ceiling}; "
            f"returning the {len(out)} terms below it",
            QuotientStream(capped, tuple(out), provenance),
        )
    return QuotientStream(family, tuple(out), provenance)


@dataclass(frozen=True)
class FamilyCount:
    """Counts for a family up to ``x``.

    ``distinct`` counts different primes; ``pairs`` is set for twin-type
    families and ``representations`` for Friedlander-Iwaniec (one per (m, n)).
    """

    x: int
    distinct: int
    pairs: int | None = None
    representations: int | None = None


def count_family(family: PrimeFamily, x: int) -> FamilyCount:
    kind = family.kind
    if kind is Kind.ALL_PRIMES:
        return FamilyCount(x, int(len(sieve_primes(x))))
    if kind in (Kind.TWIN, Kind.DTWIN):
        ps = sieve_primes(x)
        hits = np.flatnonzero(np.diff(ps) == family.gap)
        members = np.union1d(ps[hits], ps[hits + 1])
        return FamilyCount(x, int(members.size), pairs=int(hits.size))
    if kind is Kind.QUAD_M2P1:
        return FamilyCount(x, sum(1 for _ in _m2p1_quotients(x)))
    if kind is Kind.FRIEDLANDER_IWANIEC:
        vals = _fi_values(math.isqrt(x), int(x**0.25) + 1, ceiling=x)
        prime_vals = vals[_is_prime_array(vals, x)]
        return FamilyCount(x, int(np.unique(prime_vals).size), representations=int(prime_vals.size))
    return FamilyCount(x, len(family_quotients(PrimeFamily(kind, x, family.d))))


@dataclass(frozen=True)
class GapRecord:
    d: int
    lower: int
    upper: int
    is_first_occurrence: bool = True


def first_gap_occurrence(d: int, limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> GapRecord | None:
    """Smallest consecutive-prime pair ``(p, p + d)`` with ``p + d <= limit``, or None."""
    if d < 1 or (d % 2 and d != 1):
        raise DomainError("gap must be even (or 1)")
    if d == 1:
        return GapRecord(1, 2, 3) if limit >= 3 else None
    prev = 2
    for seg in iter_sieve_segments(3, limit, segment_size):
        ps = seg.primes()
        if ps.size == 0:
            continue
        if int(ps[0]) - prev == d:
            return GapRecord(d, prev, int(ps[0]))
        hits = np.flatnonzero(np.diff(ps) == d)
        if hits.size:
            i = int(hits[0])
            return GapRecord(d, int(ps[i]), int(ps[i + 1]))
        prev = int(ps[-1])
    return None


def chebyshev_theta(x: float) -> float:
    """Sum of natural logs of the primes ``<= x`` (exactly rounded summation)."""
    if x < 2:
        raise DomainError("theta(x) needs x >= 2")
    return math.fsum(np.log(sieve_primes(int(x)).astype(np.float64)).tolist())


def primorial(p: int) -> int:
    """Product of all primes ``<= p``; ``p`` itself must be prime."""
    if p < 2 or not is_probable_prime(p):
        raise DomainError(f"primorial needs a prime argument, got {p}")
    return math.prod(sieve_primes(p).tolist())
