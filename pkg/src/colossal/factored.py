"""Exact arithmetic on factored integers: sigma, phi, sigma_{-s}, primes, theta.

A :class:`FactoredNumber` is a positive integer stored purely as its prime
factorization.  Champions constructed elsewhere in the package routinely have
thousands of decimal digits, so nothing here forces materializing the integer
value; ratios like sigma(n)/n come out as exact :class:`fractions.Fraction`
objects computed prime by prime, and transcendental quantities (theta, the
prime sums) come out as outward-rounded intervals.
"""

from __future__ import annotations

import threading
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import gmpy2

from .intervals import DEFAULT_PRECISION, Interval, _ctxs

_TRIAL_DIVISION_LIMIT = 10**14  # factor() refuses beyond this (sieve to 1e7)

# ---------------------------------------------------------------------------
# prime sieve cache


class _SieveCache:
    """Monotonically growing prime list; growth is lock-guarded so concurrent
    callers behave as if serialized."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._limit = 0
        self._primes: list[int] = []

    def ensure(self, limit: int) -> None:
        if limit <= self._limit:
            return
        with self._lock:
            if limit <= self._limit:
                return
            new_limit = max(limit, 2 * self._limit, 1 << 16)
            sieve = bytearray([1]) * (new_limit + 1)
            sieve[0:2] = b"\x00\x00"
            for p in range(2, isqrt(new_limit) + 1):
                if sieve[p]:
                    start = p * p
                    sieve[start :: p] = b"\x00" * ((new_limit - start) // p + 1)
            self._primes = [i for i, flag in enumerate(sieve) if flag]
            self._limit = new_limit

    def primes_up_to(self, x: int) -> list[int]:
        if x < 2:
            return []
        self.ensure(x)
        return self._primes[: bisect_right(self._primes, x)]


_SIEVE = _SieveCache()


def primes_up_to(x: int) -> list[int]:
    """All primes <= x, ascending."""
    if x < 0:
        raise ValueError("x must be >= 0")
    return _SIEVE.primes_up_to(x)


def next_prime(x: int) -> int:
    """Smallest prime strictly greater than x."""
    n = x + 1
    while True:
        if is_prime(n):
            return n
        n += 1


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the base set is proven complete below 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n >= 3317044064679887385961981:
        raise ValueError("primality test limited to n < 3.3e24")
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# FactoredNumber


@dataclass(frozen=True)
class FactoredNumber:
    """A positive integer as an ordered tuple of (prime, exponent) pairs.

    Invariants: primes strictly increasing, exponents >= 1; the empty tuple
    is n = 1.  Validation happens in the constructors, not in __init__, so
    internal code that already knows its pairs are canonical can build
    directly.
    """

    factors: tuple[tuple[int, int], ...]

    # -- constructors ----------------------------------------------------

    @staticmethod
    def one() -> "FactoredNumber":
        return FactoredNumber(())

    @staticmethod
    def from_factors(pairs) -> "FactoredNumber":
        pairs = tuple((int(p), int(e)) for p, e in pairs)
        last = 1
        for p, e in pairs:
            if p <= last:
                raise ValueError(f"primes must be strictly increasing, got {p} after {last}")
            if e < 1:
                raise ValueError(f"exponent must be >= 1, got {p}^{e}")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            last = p
        return FactoredNumber(pairs)

    @staticmethod
    def from_int(n: int) -> "FactoredNumber":
        return factor(n)

    # -- exact integer quantities ----------------------------------------

    def value(self) -> int:
        """The exact integer.  Fine at desk scale; avoid for huge champions."""
        n = 1
        for p, e in self.factors:
            n *= p**e
        return n

    def __int__(self) -> int:
        return self.value()

    def is_one(self) -> bool:
        return not self.factors

    def sigma(self) -> int:
        """Sum of divisors, via the per-prime geometric sums."""
        s = 1
        for p, e in self.factors:
            s *= (p ** (e + 1) - 1) // (p - 1)
        return s

    def phi(self) -> int:
        """Euler's totient."""
        t = 1
        for p, e in self.factors:
            t *= p ** (e - 1) * (p - 1)
        return t

    def divisor_count(self) -> int:
        d = 1
        for _, e in self.factors:
            d *= e + 1
        return d

    def sigma_over_n(self) -> Fraction:
        """sigma(n)/n as an exact reduced fraction, never touching sigma(n) itself."""
        f = Fraction(1)
        for p, e in self.factors:
            f *= Fraction(p ** (e + 1) - 1, p**e * (p - 1))
        return f

    def sigma_minus_s(self, s) -> Fraction:
        """Exact sum of d^(-s) over divisors d; s must be a non-negative integer.

        s = 0 counts divisors; s = 1 equals sigma(n)/n.  Non-integer s has no
        exact rational value in general: use :func:`sigma_minus_s_interval`.
        """
        s = Fraction(s)
        if s < 0 or s.denominator != 1:
            raise ValueError(
                f"exact path needs integer s >= 0, got {s}; use sigma_minus_s_interval"
            )
        k = s.numerator
        if k == 0:
            return Fraction(self.divisor_count())
        f = Fraction(1)
        for p, e in self.factors:
            q = p**k
            f *= Fraction(q ** (e + 1) - 1, q**e * (q - 1))
        return f

    # -- structure --------------------------------------------------------

    def largest_prime(self) -> int:
        """P+(n), the largest prime factor; 1 for n = 1 by convention."""
        return self.factors[-1][0] if self.factors else 1

    def exponent_of(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
            if q > p:
                return 0
        return 0

    def multiply(self, other: "FactoredNumber") -> "FactoredNumber":
        """Product by merging factorizations (exponents add)."""
        merged: dict[int, int] = dict(self.factors)
        for p, e in other.factors:
            merged[p] = merged.get(p, 0) + e
        return FactoredNumber(tuple(sorted(merged.items())))

    def exponents_non_increasing(self) -> bool:
        es = [e for _, e in self.factors]
        return all(a >= b for a, b in zip(es, es[1:]))

    # -- interval quantities ----------------------------------------------

    def log_interval(self, precision: int = DEFAULT_PRECISION) -> Interval:
        """Enclosure of log n = sum e_p log p, never materializing n."""
        down, up = _ctxs(precision)
        lo = gmpy2.mpfr(0)
        hi = gmpy2.mpfr(0)
        for p, e in self.factors:
            lo = down.add(lo, down.mul(e, down.log(p)))
            hi = up.add(hi, up.mul(e, up.log(p)))
        return Interval(lo, hi, precision)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def factor(n: int) -> FactoredNumber:
    """Factor n >= 1 by trial division against the cached sieve.

    Every hard number in this package is *constructed* already factored, so
    there is deliberately no general-purpose factorization engine; inputs
    beyond 1e14 are rejected rather than half-handled.
    """
    if n < 1:
        raise ValueError(f"factor() needs n >= 1, got {n}")
    if n > _TRIAL_DIVISION_LIMIT:
        raise ValueError(f"n too large for trial division ({n} > {_TRIAL_DIVISION_LIMIT})")
    if n == 1:
        return FactoredNumber.one()
    pairs: list[tuple[int, int]] = []
    rest = n
    for p in primes_up_to(isqrt(n)):
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            pairs.append((p, e))
    if rest > 1:
        pairs.append((rest, 1))  # rest has no factor <= sqrt(n), hence prime
    return FactoredNumber(tuple(pairs))


def as_factored(n) -> FactoredNumber:
    return n if isinstance(n, FactoredNumber) else factor(int(n))


# ---------------------------------------------------------------------------
# arithmetic over primes


def primorial(p: int) -> FactoredNumber:
    """p# = product of all primes <= p; rejects composite or sub-2 input."""
    if not is_prime(p):
        raise ValueError(f"primorial needs a prime argument, got {p}")
    return FactoredNumber(tuple((q, 1) for q in primes_up_to(p)))


def theta(x: int, precision: int = DEFAULT_PRECISION) -> Interval:
    """Chebyshev's theta: enclosure of sum of log p over primes p <= x."""
    if x < 0:
        raise ValueError("x must be >= 0")
    down, up = _ctxs(precision)
    lo = gmpy2.mpfr(0)
    hi = gmpy2.mpfr(0)
    for p in primes_up_to(x):
        lo = down.add(lo, down.log(p))
        hi = up.add(hi, up.log(p))
    return Interval(lo, hi, precision)


def prime_log_sum(x: int, s, precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of sum over primes p <= x of log p / (p^s - 1), for s > 0.

    s may be an exact positive integer/Fraction or an Interval.
    """
    if x < 2:
        raise ValueError("x must be >= 2")
    s_iv = s if isinstance(s, Interval) else Interval.exact(Fraction(s), precision)
    if not s_iv.is_positive():
        raise ValueError("s must be > 0")
    s_exact = None if isinstance(s, Interval) else Fraction(s)
    total = Interval.exact(0, precision)
    for p in primes_up_to(x):
        log_p = Interval.exact(p, precision).log()
        if s_exact is not None and s_exact.denominator == 1:
            denom = Interval.exact(p ** s_exact.numerator - 1, precision)
        else:
            denom = (s_iv * log_p).exp() - 1
        total = total + log_p / denom
    return total


def sigma_minus_s_interval(n, s, precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of sigma_{-s}(n) = prod over p^e || n of (1-p^(-s(e+1)))/(1-p^(-s)).

    Works for any real parameter s > 0 given as an Interval (or exact rational,
    converted).  Agrees with the exact rational path at integer s.
    """
    fn = as_factored(n)
    s_iv = s if isinstance(s, Interval) else Interval.exact(Fraction(s), precision)
    if not s_iv.is_positive():
        raise ValueError("s must be > 0")
    result = Interval.exact(1, precision)
    one = Interval.exact(1, precision)
    for p, e in fn.factors:
        log_p = Interval.exact(p, precision).log()
        top = one - (-(s_iv * (e + 1)) * log_p).exp()
        bottom = one - (-s_iv * log_p).exp()
        result = result * (top / bottom)
    return result
