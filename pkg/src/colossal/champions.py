"""Champion numbers: superabundant, colossally abundant, and the two-parameter
superior champions built from the epsilon-breakpoint equation.

For a parameter pair (s, epsilon) the superior champion is determined by the
cut points x_r solving  x^eps = (1 - x^(-s(r+1))) / (1 - x^(-s r)); the
exponent of a prime p is the number of levels r with p <= x_r.  Equivalently,
p's exponent rises from r-1 to r exactly when epsilon falls below the
breakpoint value  eps(p, r) = log_base_p of that ratio.  Walking breakpoints
in decreasing order therefore enumerates the champions one prime power at a
time; at s = 1 these are the colossally abundant (CA) numbers.

Breakpoint ordering for s = 1 is settled *exactly*: an interval comparison is
the fast pre-filter, and near-ties fall back to a Stern-Brocot walk that
separates the two logarithmic ratios with a rational witness, using only
big-integer power comparisons.  A genuine tie between distinct breakpoints
(an open algebraic question) would exhaust the walk and is reported as a tie
rather than silently resolved.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt, log

import numpy as np

from .factored import FactoredNumber, next_prime, primes_up_to
from .gronwall import gronwall_G, gronwall_G_from_parts, gronwall_G_producer
from .intervals import (
    DEFAULT_PRECISION,
    MAX_PRECISION,
    Interval,
    Verdict,
    compare,
)
from . import sieves

import gmpy2

_ONE = Fraction(1)


class BreakpointTie(ArithmeticError):
    """Two breakpoint values could not be separated (and, for s != 1, cannot
    be proven equal either).  Callers surface this as an explicit tie."""


class SieveTooSmall(ValueError):
    """The requested epsilon admits primes beyond the given prime ceiling."""


@dataclass(frozen=True)
class Breakpoint:
    """The parameter value at which `prime`'s exponent rises to `exponent`.

    For s = 1 the value is exactly log_p((p^(r+1)-1)/(p^(r+1)-p)) and all
    comparisons against rationals are done by integer power comparison.
    """

    s: Fraction
    prime: int
    exponent: int  # r >= 1; crossing raises prime^(r-1) -> prime^r

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError("exponent must be >= 1")

    def ratio(self) -> Fraction:
        """(p^(r+1)-1)/(p^(r+1)-p); only meaningful for s = 1."""
        if self.s != 1:
            raise ValueError("exact ratio only defined for s = 1")
        p, r = self.prime, self.exponent
        top = p ** (r + 1) - 1
        return Fraction(top, top + 1 - p)

    def enclosure(self, precision: int = DEFAULT_PRECISION) -> Interval:
        return _bp_enclosure(self.s, self.prime, self.exponent, precision)

    def float_value(self) -> float:
        iv = self.enclosure(64)
        return iv.midpoint_float()

    def cmp_rational(self, q: Fraction, precision_cap: int = MAX_PRECISION) -> int:
        """Sign of (breakpoint value - q); exact for s = 1, else certified
        by escalating enclosures.  Never returns 0 for s = 1 (the value is
        irrational: p does not divide p^(r+1)-1)."""
        q = Fraction(q)
        if q <= 0:
            return 1
        if q >= 1:
            return -1  # breakpoint values lie strictly inside (0, 1)
        if self.s == 1:
            p, r = self.prime, self.exponent
            num = p ** (r + 1) - 1
            den = num + 1 - p
            u, v = q.numerator, q.denominator
            lhs = num**v
            rhs = den**v * p**u
            if lhs == rhs:  # p-adic valuation makes this impossible; be safe
                return 0
            return 1 if lhs > rhs else -1
        precision = DEFAULT_PRECISION
        while True:
            iv = self.enclosure(precision)
            if iv.lo > q:
                return 1
            if iv.hi < q:
                return -1
            if precision >= precision_cap:
                raise BreakpointTie(
                    f"breakpoint {self.descriptor()} vs {q}: no separation at {precision} bits"
                )
            precision *= 2

    def descriptor(self) -> str:
        """Canonical text form, exact for s = 1 (used by the stores)."""
        if self.s == 1:
            rt = self.ratio()
            return f"log[{self.prime}]({rt.numerator}/{rt.denominator})"
        return f"bp(s={self.s},p={self.prime},r={self.exponent})"

    def __str__(self) -> str:
        return self.descriptor()


@functools.lru_cache(maxsize=200_000)
def _bp_enclosure(s: Fraction, p: int, r: int, precision: int) -> Interval:
    if s == 1:
        top = p ** (r + 1) - 1
        ratio = Interval.exact(Fraction(top, top + 1 - p), precision)
    else:
        log_p = Interval.exact(p, precision).log()
        one = Interval.exact(1, precision)
        top = one - (-(Interval.exact(s, precision) * (r + 1)) * log_p).exp()
        bottom = one - (-(Interval.exact(s, precision) * r) * log_p).exp()
        ratio = top / bottom
        return ratio.log() / log_p
    return ratio.log() / Interval.exact(p, precision).log()


def compare_breakpoints(a: Breakpoint, b: Breakpoint) -> int:
    """Total order on breakpoint values: -1, 0 (same breakpoint), or 1.

    Interval refinement decides every realistic case; for s = 1 a bounded
    Stern-Brocot walk gives an exact decision, and exhausting it raises
    :class:`BreakpointTie`.
    """
    if a == b:
        return 0
    precision = DEFAULT_PRECISION
    while precision <= MAX_PRECISION:
        ia, ib = a.enclosure(precision), b.enclosure(precision)
        if ia.certainly_lt(ib):
            return -1
        if ia.certainly_gt(ib):
            return 1
        precision *= 2
    if a.s == 1 and b.s == 1:
        sign = _stern_brocot_cmp(a, b)
        if sign is not None:
            return sign
    raise BreakpointTie(f"cannot order {a.descriptor()} and {b.descriptor()}")


def _stern_brocot_cmp(a: Breakpoint, b: Breakpoint, max_steps: int = 64) -> int | None:
    """Search (0,1) for a rational strictly between the two breakpoint values.

    Each mediant is compared exactly against both values; if the signs differ
    the mediant is a witness for the order.  Denominators grow at worst
    Fibonacci-fast, so the walk is capped.
    """
    lo = (0, 1)
    hi = (1, 1)
    for _ in range(max_steps):
        m = Fraction(lo[0] + hi[0], lo[1] + hi[1])
        ca = a.cmp_rational(m)
        cb = b.cmp_rational(m)
        if ca != cb:
            return -1 if ca < cb else 1
        if ca > 0:
            lo = (m.numerator, m.denominator)
        else:
            hi = (m.numerator, m.denominator)
    return None


# ---------------------------------------------------------------------------
# breakpoint tables and streams


@dataclass(frozen=True)
class BreakpointTable:
    """All breakpoints with value >= epsilon_floor and prime <= prime_ceiling,
    sorted by strictly decreasing value."""

    s: Fraction
    epsilon_floor: Fraction
    prime_ceiling: int
    breakpoints: tuple[Breakpoint, ...]


def _sort_breakpoints_desc(bps: list[Breakpoint]) -> list[Breakpoint]:
    """Sort by float key, then certify each adjacency rigorously (transitivity
    then gives the whole order).  Falls back to full exact sorting if a float
    adjacency was wrong."""
    bps = sorted(bps, key=lambda b: -b.float_value())
    for x, y in zip(bps, bps[1:]):
        if compare_breakpoints(x, y) < 0:
            bps = sorted(bps, key=functools.cmp_to_key(compare_breakpoints), reverse=True)
            break
    return bps


def ca_breakpoints(
    s: Fraction | int = 1, epsilon_floor: Fraction = Fraction(1, 100), prime_ceiling: int = 10**5
) -> BreakpointTable:
    """Enumerate all (prime, exponent) breakpoints with value >= epsilon_floor."""
    s = Fraction(s)
    epsilon_floor = Fraction(epsilon_floor)
    if epsilon_floor <= 0:
        raise ValueError("epsilon_floor must be > 0")
    if prime_ceiling < 2:
        raise ValueError("prime_ceiling must be >= 2")
    found: list[Breakpoint] = []
    for p in primes_up_to(prime_ceiling):
        r = 1
        while True:
            bp = Breakpoint(s, p, r)
            if bp.cmp_rational(epsilon_floor) < 0:
                break
            found.append(bp)
            r += 1
        if r == 1:  # eps(p, 1) decreases in p: no later prime qualifies
            break
    return BreakpointTable(s, epsilon_floor, prime_ceiling, tuple(_sort_breakpoints_desc(found)))


def _breakpoints_above(prime_bound: int) -> list[Breakpoint]:
    """All s=1 breakpoints with value >= eps(sentinel, 1) for the sentinel
    prime just above `prime_bound`, sorted descending; the sentinel's own
    breakpoint closes the list (it terminates walks)."""
    sentinel = next_prime(prime_bound)
    floor_bp = Breakpoint(_ONE, sentinel, 1)
    found: list[Breakpoint] = [floor_bp]
    for p in primes_up_to(prime_bound):
        r = 1
        while True:
            bp = Breakpoint(_ONE, p, r)
            if r > 1 and compare_breakpoints(bp, floor_bp) < 0:
                break
            found.append(bp)
            r += 1
    return _sort_breakpoints_desc(found)


def _first_k_breakpoints(k: int) -> list[Breakpoint]:
    """The k largest s=1 breakpoint values, plus one more as the range floor.

    If q is the (k+2)-nd prime, every breakpoint below eps(q, 1) is dominated
    by the k+1 first-entry breakpoints of the primes up to q, so collecting
    down to eps(q, 1) is guaranteed to capture the true top k+1.
    """
    # (k+2)-nd prime via a safe upper bound on p_n
    n = k + 2
    bound = 15 if n < 6 else int(n * (log(n) + log(log(n)))) + 10
    primes = primes_up_to(bound)
    while len(primes) < n:
        bound *= 2
        primes = primes_up_to(bound)
    sentinel = primes[n - 1]
    bps = _breakpoints_above(sentinel - 1)  # floor at eps(sentinel, 1)
    return bps[: k + 1]


# ---------------------------------------------------------------------------
# champion records


@dataclass(frozen=True)
class ChampionRecord:
    """A champion number together with the parameter range that produces it.

    epsilon_low/epsilon_high bound the half-open range (low, high] of epsilon
    values whose champion is n; both are None for SA records (no parameter).
    G_enclosure is None only for n = 1, where G is undefined.
    """

    n: FactoredNumber
    kind: str  # "SA" | "CA" | "SHC"
    seq_index: int | None
    s: Fraction | None
    epsilon_low: Breakpoint | None
    epsilon_high: Breakpoint | None
    G_enclosure: Interval | None
    largest_prime: int
    sigma_over_n: Fraction | None = None
    log_n: Interval | None = None
    x_levels: tuple[Interval, ...] | None = field(default=None, repr=False)
    tie: bool = False
    tie_partner: FactoredNumber | None = None

    @property
    def epsilon_range(self) -> tuple[Breakpoint | None, Breakpoint | None]:
        return (self.epsilon_low, self.epsilon_high)


# ---------------------------------------------------------------------------
# colossally abundant walk (s = 1)


def ca_walk(breakpoints: list[Breakpoint], precision: int = DEFAULT_PRECISION):
    """Yield CA records by crossing the given (descending) breakpoints in order.

    The last breakpoint is treated as the floor of the final record's range
    and is not crossed.  The running sigma(n)/n is exact (a GMP rational);
    log n is maintained as an interval with headroom precision.
    """
    work_prec = max(precision, 192)
    ratio = gmpy2.mpq(1)
    log_n = Interval.exact(0, work_prec)
    exponents: dict[int, int] = {}
    for k, bp in enumerate(breakpoints[:-1]):
        p, r = bp.prime, bp.exponent
        if exponents.get(p, 0) != r - 1:
            raise AssertionError(f"breakpoint order broken at {bp.descriptor()}")
        exponents[p] = r
        ratio *= gmpy2.mpq(p ** (r + 1) - 1, p * (p**r - 1))
        log_n = log_n + Interval.exact(p, work_prec).log()
        n = FactoredNumber(tuple(sorted(exponents.items())))
        g = gronwall_G_from_parts(Interval.exact(ratio, work_prec), log_n).at_precision(precision)
        yield ChampionRecord(
            n=n,
            kind="CA",
            seq_index=k + 1,
            s=_ONE,
            epsilon_low=breakpoints[k + 1],
            epsilon_high=bp,
            G_enclosure=g,
            largest_prime=n.largest_prime(),
            sigma_over_n=Fraction(int(ratio.numerator), int(ratio.denominator)),
            log_n=log_n.at_precision(precision),
        )


def ca_sequence(count: int, precision: int = DEFAULT_PRECISION) -> list[ChampionRecord]:
    """The first `count` colossally abundant numbers, ascending.

    Consecutive records differ by exactly one prime power; each carries the
    half-open epsilon range that produces it and its G enclosure.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    bps = _first_k_breakpoints(count)
    return list(ca_walk(bps[: count + 1], precision))


def ca_walk_up_to_prime(max_largest_prime: int, precision: int = DEFAULT_PRECISION):
    """Yield CA records while the largest prime factor stays <= max_largest_prime.

    The walk stops just before the first prime above the bound would enter,
    so the final record's epsilon range is still fully certified.
    """
    if max_largest_prime < 2:
        raise ValueError("max_largest_prime must be >= 2")
    bps = _breakpoints_above(max_largest_prime)
    yield from ca_walk(bps, precision)


# ---------------------------------------------------------------------------
# superabundant enumeration


def _candidate_values(limit: int):
    """Numbers <= limit whose exponents are non-increasing over the initial
    primes (every record-setter of sigma(n)/n has this shape: pushing mass
    toward smaller primes lowers the value and raises the ratio)."""
    primes = []
    prod = 1
    while True:
        p = next_prime(primes[-1]) if primes else 2
        prod *= p
        if prod > limit:
            break
        primes.append(p)

    out: list[tuple[int, tuple[tuple[int, int], ...]]] = [(1, ())]

    def extend(idx: int, value: int, max_exp: int, pairs: tuple):
        p = primes[idx]
        v = value
        for e in range(1, max_exp + 1):
            v *= p
            if v > limit:
                break
            new_pairs = pairs + ((p, e),)
            out.append((v, new_pairs))
            if idx + 1 < len(primes):
                extend(idx + 1, v, e, new_pairs)

    if primes:
        extend(0, 1, limit.bit_length(), ())
    return out


def sa_enumerate(limit: int, precision: int = DEFAULT_PRECISION) -> list[ChampionRecord]:
    """All superabundant numbers <= limit: record-setters of sigma(n)/n.

    Enumeration scans only non-increasing-exponent candidates (a strict
    superset of the SA numbers) with exact rational record comparisons.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    cands = sorted(_candidate_values(limit))
    records: list[ChampionRecord] = []
    best = Fraction(0)
    idx = 0
    for value, pairs in cands:
        n = FactoredNumber(pairs)
        ratio = n.sigma_over_n()
        if ratio > best:
            best = ratio
            idx += 1
            records.append(
                ChampionRecord(
                    n=n,
                    kind="SA",
                    seq_index=idx,
                    s=None,
                    epsilon_low=None,
                    epsilon_high=None,
                    G_enclosure=None if value == 1 else gronwall_G(n, precision),
                    largest_prime=n.largest_prime(),
                    sigma_over_n=ratio,
                )
            )
    return records


# ---------------------------------------------------------------------------
# generalized superior champions for arbitrary (s, epsilon)


@dataclass(frozen=True)
class ShcParameter:
    s: Fraction
    epsilon: Fraction

    def __post_init__(self):
        object.__setattr__(self, "s", Fraction(self.s))
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.s <= 0:
            raise ValueError("s must be > 0")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")


def _crossed(bp: Breakpoint, epsilon: Fraction, ties: list[Breakpoint]) -> bool:
    """Whether eps(bp) >= epsilon, i.e. the breakpoint is crossed at epsilon.

    For s = 1 this is exact and a tie is impossible (the breakpoint value is
    irrational).  For s != 1 an unresolvable near-tie is counted as crossed
    (the larger neighbour is the superior champion at equality) and recorded.
    """
    try:
        return bp.cmp_rational(epsilon) >= 0
    except BreakpointTie:
        ties.append(bp)
        return True


def _shc_ratio_interval(s: Fraction, r: int, x: Fraction, precision: int) -> Interval:
    """(1 - x^(-s(r+1))) / (1 - x^(-s r)) for exact rational x > 1."""
    log_x = Interval.exact(x, precision).log()
    one = Interval.exact(1, precision)
    s_iv = Interval.exact(s, precision)
    top = one - (-(s_iv * (r + 1)) * log_x).exp()
    bottom = one - (-(s_iv * r) * log_x).exp()
    return top / bottom


def _shc_gap_sign(s: Fraction, epsilon: Fraction, r: int, x: Fraction) -> int:
    """Certified sign of log(ratio(x)) - epsilon*log(x): positive while x < x_r.

    Escalates precision until the enclosure excludes 0; for s = 1 an exact
    rational test decides the (measure-zero) case of an exact root.
    """
    if s == 1:
        # exact: x^eps vs (x^(r+1)-1)/(x^(r+1)-x), cleared of radicals
        u, v = epsilon.numerator, epsilon.denominator
        top = x ** (r + 1) - 1
        bottom = x ** (r + 1) - x
        lhs = top**v
        rhs = bottom**v * x**u
        if lhs == rhs:
            return 0
        return 1 if lhs > rhs else -1
    precision = DEFAULT_PRECISION
    while precision <= MAX_PRECISION:
        gap = _shc_ratio_interval(s, r, x, precision).log() - Interval.exact(
            epsilon, precision
        ) * Interval.exact(x, precision).log()
        if gap.is_positive():
            return 1
        if gap.is_negative():
            return -1
        precision *= 2
    raise BreakpointTie(f"sign of cut equation undecidable at x={x} (s={s}, r={r})")


def _bisect_x_level(
    s: Fraction, epsilon: Fraction, r: int, hi: Fraction, precision: int
) -> Interval | None:
    """Certified bracket for x_r, the root of x^eps = ratio(x) on [2, hi].

    Returns None when there is no root >= 2 (the level is empty), a point
    interval when the root is hit exactly, else an outward-rounded bracket
    after 1 + precision/2 bisection steps.
    """
    lo = Fraction(2)
    sign_lo = _shc_gap_sign(s, epsilon, r, lo)
    if sign_lo < 0:
        return None
    if sign_lo == 0:
        return Interval.exact(lo, precision)
    for _ in range(1 + precision // 2):
        mid = (lo + hi) / 2
        sign = _shc_gap_sign(s, epsilon, r, mid)
        if sign == 0:
            return Interval.exact(mid, precision)
        if sign > 0:
            lo = mid
        else:
            hi = mid
    return Interval.from_endpoints(lo, hi, precision)


def shc_from_epsilon(
    param: ShcParameter, prime_ceiling: int = 10**6, precision: int = DEFAULT_PRECISION
) -> ChampionRecord:
    """The generalized superior champion for (s, epsilon).

    Exponents come from breakpoint comparisons (exact at s = 1); the x_r cut
    points are re-derived independently by certified bisection and retained on
    the record for the double-product identity check.  When s != 1 and a
    breakpoint cannot be separated from epsilon at the precision cap, the
    larger neighbour is returned with ``tie=True`` and the smaller neighbour
    attached as ``tie_partner``.
    """
    s, epsilon = param.s, param.epsilon
    ties: list[Breakpoint] = []

    sentinel = next_prime(prime_ceiling)
    if _crossed(Breakpoint(s, sentinel, 1), epsilon, []):
        raise SieveTooSmall(
            f"epsilon={epsilon} admits primes beyond {prime_ceiling}; raise prime_ceiling"
        )

    pairs: list[tuple[int, int]] = []
    p = 2
    while _crossed(Breakpoint(s, p, 1), epsilon, ties):
        e = 1
        while _crossed(Breakpoint(s, p, e + 1), epsilon, ties):
            e += 1
        pairs.append((p, e))
        p = next_prime(p)

    n = FactoredNumber(tuple(pairs))
    big_r = max((e for _, e in pairs), default=0)

    x_levels: list[Interval] = []
    hi = Fraction(sentinel)
    for r in range(1, big_r + 1):
        iv = _bisect_x_level(s, epsilon, r, hi, precision)
        if iv is None:
            raise AssertionError(f"level {r} lost between exponent rule and bisection")
        x_levels.append(iv)
        hi = iv.to_fractions()[1]  # x_r decreases with r

    # epsilon range: tightest crossed breakpoint above, largest uncrossed below
    crossed = [Breakpoint(s, q, e) for q, e in pairs]
    uncrossed = [Breakpoint(s, q, e + 1) for q, e in pairs]
    uncrossed.append(Breakpoint(s, p, 1))  # first prime that stayed out
    eps_high = None
    for bp in crossed:
        if eps_high is None or compare_breakpoints(bp, eps_high) < 0:
            eps_high = bp
    eps_low = None
    for bp in uncrossed:
        if eps_low is None or compare_breakpoints(bp, eps_low) > 0:
            eps_low = bp

    tie_partner = None
    if ties:
        # drop the tied crossings to expose the smaller neighbouring champion
        drop = {bp.prime: sum(1 for t in ties if t.prime == bp.prime) for bp in ties}
        alt = [(q, e - drop.get(q, 0)) for q, e in pairs]
        tie_partner = FactoredNumber(tuple((q, e) for q, e in alt if e > 0))

    return ChampionRecord(
        n=n,
        kind="SHC",
        seq_index=None,
        s=s,
        epsilon_low=eps_low,
        epsilon_high=eps_high,
        G_enclosure=None if n.is_one() else gronwall_G(n, precision),
        largest_prime=n.largest_prime(),
        sigma_over_n=n.sigma_over_n(),
        log_n=n.log_interval(precision),
        x_levels=tuple(x_levels),
        tie=bool(ties),
        tie_partner=tie_partner,
    )


def sigma_product_check(
    record: ChampionRecord, s: Fraction | int | None = None, precision: int = DEFAULT_PRECISION
) -> Interval:
    """Enclosure of the layered product over levels r and primes p <= x_r of
    (1 - p^(-s(r+1)))/(1 - p^(-s r)), which must equal sigma_{-s}(n).

    The per-level prime sets come from the record's exponents (p belongs to
    level r iff its exponent is >= r), which is the certified reading of the
    x_r cut points.
    """
    if s is None:
        s = record.s
    if s is None:
        raise ValueError("record has no parameter s; pass one explicitly")
    s = Fraction(s)
    if record.x_levels is None:
        raise ValueError("record was not built with x levels retained")
    big_r = max((e for _, e in record.n.factors), default=0)
    if big_r != len(record.x_levels):
        raise AssertionError("x level count does not match exponents")
    one = Interval.exact(1, precision)
    result = one
    s_iv = Interval.exact(s, precision)
    for r in range(1, big_r + 1):
        for p, e in record.n.factors:
            if e >= r:
                log_p = Interval.exact(p, precision).log()
                top = one - (-(s_iv * (r + 1)) * log_p).exp()
                bottom = one - (-(s_iv * r) * log_p).exp()
                result = result * (top / bottom)
    return result


# ---------------------------------------------------------------------------
# brute-force maximum of G on a range (sandwich-lemma oracle)


_RANGE_GUARD = 10**7

_g_cache_max = 0
_g_cache: np.ndarray | None = None


def _g_floats(n_max: int) -> np.ndarray:
    global _g_cache_max, _g_cache
    if _g_cache is None or n_max > _g_cache_max:
        _g_cache = sieves.gronwall_float_array(n_max)
        _g_cache_max = n_max
    return _g_cache


def max_G_between(
    n_lo: int, n_hi: int, precision: int = DEFAULT_PRECISION
) -> tuple[int, Interval]:
    """argmax of G(n) on the open interval (n_lo, n_hi), with its enclosure.

    Float prefilter over a sieved array, then rigorous pairwise comparison of
    every near-maximal candidate; an undecidable comparison (only possible if
    two distinct integers shared a G value) resolves to the smaller n.
    """
    if not (2 <= n_lo < n_hi <= _RANGE_GUARD):
        raise ValueError(f"range must satisfy 2 <= lo < hi <= {_RANGE_GUARD}")
    if n_hi - n_lo < 2:
        raise ValueError(f"open interval ({n_lo}, {n_hi}) is empty")
    g = _g_floats(n_hi)
    window = g[n_lo + 1 : n_hi]
    best = float(np.nanmax(window))
    slack = 1e-9 * max(1.0, abs(best))
    cand_idx = np.nonzero(window >= best - slack)[0] + n_lo + 1
    champion = int(cand_idx[0])
    for other in cand_idx[1:]:
        other = int(other)
        verdict = compare(
            gronwall_G_producer(other), gronwall_G_producer(champion), ">"
        )
        if verdict.state is Verdict.HOLDS:
            champion = other
        # FAILS keeps the current champion; UNDECIDED would mean two distinct
        # integers share a G value -- resolve the tie to the smaller n.
    return champion, gronwall_G(champion, precision)
