"""The Gronwall quotient G(n) = sigma(n)/(n log log n) and friends.

G is only ever produced as an interval: the exact rational sigma(n)/n comes
from the factorization, log log n is evaluated as an enclosure (through
log n = sum e_p log p, so n itself is never materialized), and the quotient
is outward-rounded.  For n = 2, log log 2 < 0 and G is a certified negative
interval; nothing here assumes a sign.
"""

from __future__ import annotations

import gmpy2

from .factored import FactoredNumber, as_factored, primes_up_to
from .intervals import (
    DEFAULT_PRECISION,
    Interval,
    Producer,
    _ctxs,
)

_ESCALATION_LIMIT = 1 << 20  # internal zero-exclusion loop; unreachable for integers


def log_log_interval(n, precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of log log n for n >= 2 (negative for n = 2)."""
    fn = as_factored(n)
    if fn.is_one():
        raise ValueError("log log n undefined for n = 1")
    return fn.log_interval(precision).log()


def gronwall_G(n, precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of G(n) = (sigma(n)/n) / log log n, n >= 2.

    If the log log n enclosure straddles 0 (impossible for integers at any
    reasonable precision, since log n never equals 1, but the contract is
    uniform) the working precision is doubled until 0 is excluded rather than
    raising.
    """
    fn = as_factored(n)
    if fn.is_one():
        raise ValueError("G(n) undefined for n = 1")
    ratio = fn.sigma_over_n()
    p = precision
    while True:
        ll = log_log_interval(fn, p)
        if not ll.contains_zero():
            return (Interval.exact(ratio, p) / ll).at_precision(precision)
        if p >= _ESCALATION_LIMIT:
            raise ArithmeticError(f"cannot exclude 0 from log log enclosure for n={fn}")
        p *= 2


def gronwall_G_producer(n) -> Producer:
    """Precision -> G(n) enclosure, for use with the adaptive compare loop."""
    fn = as_factored(n)
    return lambda precision: gronwall_G(fn, precision)


def gronwall_G_from_parts(sigma_over_n, log_n: Interval) -> Interval:
    """G from an already-known sigma(n)/n enclosure/fraction and log n enclosure.

    Used by the champion walks, which maintain both incrementally.
    """
    if isinstance(sigma_over_n, Interval):
        ratio = sigma_over_n
    else:
        ratio = Interval.exact(sigma_over_n, log_n.precision)
    return ratio / log_n.log()


def mertens_product(x: int, precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of prod over primes p <= x of (1 - 1/p)^(-1) = p/(p-1)."""
    if x < 2:
        raise ValueError("x must be >= 2")
    down, up = _ctxs(precision)
    lo = gmpy2.mpfr(1)
    hi = gmpy2.mpfr(1)
    for p in primes_up_to(x):
        lo = down.mul(lo, down.div(p, p - 1))
        hi = up.mul(hi, up.div(p, p - 1))
    return Interval(lo, hi, precision)


def mertens_ratio(x: int, precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of mertens_product(x) / log x; tends to e^gamma as x grows."""
    return mertens_product(x, precision) / Interval.exact(x, precision).log()
