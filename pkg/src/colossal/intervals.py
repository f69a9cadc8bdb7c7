"""Outward-rounded interval arithmetic and the adaptive comparison engine.

Every real quantity the package ever compares (Gronwall quotients, e^gamma,
log log n, Mertens products, ...) lives in an :class:`Interval` whose
endpoints are MPFR floats computed with directed rounding: the lower endpoint
is rounded toward -inf, the upper toward +inf.  Containment of the true value
is therefore a hard guarantee of every operation, not a numerical hope.

Strict inequalities between such quantities are settled by :func:`compare`,
which re-evaluates both sides at doubled precision until the enclosures
separate or a cap is reached.  The tri-state result (:class:`Verdict`) makes
"could not decide at the precision cap" an ordinary value instead of an error.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

import gmpy2

DEFAULT_PRECISION = 128
MAX_PRECISION = 4096

ExactValue = Union[int, Fraction, "gmpy2.mpz", "gmpy2.mpq"]


class IntervalZeroDivision(ArithmeticError):
    """Divisor interval contains zero; escalate precision or give up."""


class IntervalDomainError(ArithmeticError):
    """Operand interval leaves the domain of the function (e.g. log of <= 0)."""


_CTXS: dict[int, tuple[gmpy2.context, gmpy2.context]] = {}


def _ctxs(precision: int) -> tuple[gmpy2.context, gmpy2.context]:
    """(round-down, round-up) MPFR contexts at the given precision, cached."""
    pair = _CTXS.get(precision)
    if pair is None:
        if precision < 8:
            raise ValueError(f"precision must be >= 8 bits, got {precision}")
        pair = (
            gmpy2.context(precision=precision, round=gmpy2.RoundDown),
            gmpy2.context(precision=precision, round=gmpy2.RoundUp),
        )
        _CTXS[precision] = pair
    return pair


def _exact(value: ExactValue):
    """Coerce an exact number to a gmpy2 type without any rounding."""
    if isinstance(value, Fraction):
        return gmpy2.mpq(value.numerator, value.denominator)
    if isinstance(value, (int, type(gmpy2.mpz(0)), type(gmpy2.mpq(0)), type(gmpy2.mpfr(0)))):
        return value
    raise TypeError(f"not an exact numeric value: {value!r}")


class Interval:
    """Closed interval [lo, hi] of MPFR floats tagged with its working precision.

    Instances are immutable by convention; all arithmetic returns new objects.
    Binary operations work at the larger of the two operand precisions.
    """

    __slots__ = ("lo", "hi", "precision")

    def __init__(self, lo, hi, precision: int):
        if gmpy2.is_nan(lo) or gmpy2.is_nan(hi):
            raise ValueError("NaN endpoint")
        if lo > hi:
            raise ValueError(f"inverted interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "precision", precision)

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    # -- constructors --------------------------------------------------

    @classmethod
    def exact(cls, value: ExactValue, precision: int = DEFAULT_PRECISION) -> "Interval":
        """Tightest representable enclosure of an exact integer or rational."""
        v = _exact(value)
        down, up = _ctxs(precision)
        return cls(gmpy2.mpfr(v, context=down), gmpy2.mpfr(v, context=up), precision)

    @classmethod
    def from_endpoints(
        cls, lo: ExactValue, hi: ExactValue, precision: int = DEFAULT_PRECISION
    ) -> "Interval":
        """Enclosure of [lo, hi] given exact endpoint values."""
        down, up = _ctxs(precision)
        return cls(
            gmpy2.mpfr(_exact(lo), context=down),
            gmpy2.mpfr(_exact(hi), context=up),
            precision,
        )

    # -- inspection ----------------------------------------------------

    def width(self):
        """Upper bound on hi - lo (rounded up)."""
        _, up = _ctxs(self.precision)
        return up.sub(self.hi, self.lo)

    def contains(self, value: ExactValue) -> bool:
        v = _exact(value)
        return self.lo <= v and v <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def intersects(self, other: "Interval") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    # Certified order relations: True only when the enclosures prove the claim.
    def certainly_lt(self, other: "Interval") -> bool:
        return self.hi < other.lo

    def certainly_gt(self, other: "Interval") -> bool:
        return self.lo > other.hi

    def certainly_le(self, other: "Interval") -> bool:
        return self.hi <= other.lo

    def certainly_ge(self, other: "Interval") -> bool:
        return self.lo >= other.hi

    def to_fractions(self) -> tuple[Fraction, Fraction]:
        """Exact dyadic endpoints (MPFR values are binary rationals)."""
        return (_mpfr_to_fraction(self.lo), _mpfr_to_fraction(self.hi))

    def midpoint_float(self) -> float:
        return (float(self.lo) + float(self.hi)) / 2.0

    # -- rescaling -----------------------------------------------------

    def at_precision(self, precision: int) -> "Interval":
        """Outward re-rounding to another working precision."""
        down, up = _ctxs(precision)
        return Interval(
            gmpy2.mpfr(self.lo, context=down), gmpy2.mpfr(self.hi, context=up), precision
        )

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        return Interval.exact(other, self.precision)

    def __add__(self, other) -> "Interval":
        o = self._coerce(other)
        p = max(self.precision, o.precision)
        down, up = _ctxs(p)
        return Interval(down.add(self.lo, o.lo), up.add(self.hi, o.hi), p)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.precision)

    def __sub__(self, other) -> "Interval":
        o = self._coerce(other)
        p = max(self.precision, o.precision)
        down, up = _ctxs(p)
        return Interval(down.sub(self.lo, o.hi), up.sub(self.hi, o.lo), p)

    def __rsub__(self, other) -> "Interval":
        return self._coerce(other).__sub__(self)

    def __mul__(self, other) -> "Interval":
        o = self._coerce(other)
        p = max(self.precision, o.precision)
        down, up = _ctxs(p)
        if self.lo >= 0 and o.lo >= 0:  # fast path: both non-negative
            return Interval(down.mul(self.lo, o.lo), up.mul(self.hi, o.hi), p)
        cands_d = (
            down.mul(self.lo, o.lo), down.mul(self.lo, o.hi),
            down.mul(self.hi, o.lo), down.mul(self.hi, o.hi),
        )
        cands_u = (
            up.mul(self.lo, o.lo), up.mul(self.lo, o.hi),
            up.mul(self.hi, o.lo), up.mul(self.hi, o.hi),
        )
        return Interval(min(cands_d), max(cands_u), p)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        o = self._coerce(other)
        if o.contains_zero():
            raise IntervalZeroDivision(f"division by interval containing 0: [{o.lo}, {o.hi}]")
        p = max(self.precision, o.precision)
        down, up = _ctxs(p)
        if self.lo >= 0 and o.lo > 0:  # fast path
            return Interval(down.div(self.lo, o.hi), up.div(self.hi, o.lo), p)
        cands_d = (
            down.div(self.lo, o.lo), down.div(self.lo, o.hi),
            down.div(self.hi, o.lo), down.div(self.hi, o.hi),
        )
        cands_u = (
            up.div(self.lo, o.lo), up.div(self.lo, o.hi),
            up.div(self.hi, o.lo), up.div(self.hi, o.hi),
        )
        return Interval(min(cands_d), max(cands_u), p)

    def __rtruediv__(self, other) -> "Interval":
        return self._coerce(other).__truediv__(self)

    # -- elementary functions (monotone, hence two directed evaluations) ----

    def log(self) -> "Interval":
        if self.lo <= 0:
            raise IntervalDomainError(f"log of interval touching (-inf, 0]: lo={self.lo}")
        down, up = _ctxs(self.precision)
        return Interval(down.log(self.lo), up.log(self.hi), self.precision)

    def exp(self) -> "Interval":
        down, up = _ctxs(self.precision)
        return Interval(down.exp(self.lo), up.exp(self.hi), self.precision)

    def sqrt(self) -> "Interval":
        if self.lo < 0:
            raise IntervalDomainError(f"sqrt of interval below 0: lo={self.lo}")
        down, up = _ctxs(self.precision)
        return Interval(down.sqrt(self.lo), up.sqrt(self.hi), self.precision)

    def pow(self, exponent: "Interval | ExactValue") -> "Interval":
        """self ** exponent for a strictly positive base, via exp(e * log b)."""
        e = self._coerce(exponent)
        return (e * self.log()).exp()

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r}, precision={self.precision})"

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]@{self.precision}"


def _mpfr_to_fraction(x) -> Fraction:
    num, den = x.as_integer_ratio()
    return Fraction(int(num), int(den))


def decimal_string(x) -> str:
    """Exact decimal expansion of an MPFR value (binary rational, so finite).

    Canonical: minimal digits, no exponent notation.  Used by the stores and
    the JSON emitters so that serialized endpoints reload to the identical
    MPFR value at the tagged precision.
    """
    f = _mpfr_to_fraction(x) if not isinstance(x, Fraction) else x
    if f.denominator == 1:
        return str(f.numerator)
    sign = "-" if f < 0 else ""
    num, den = abs(f.numerator), f.denominator
    k = den.bit_length() - 1  # den == 2**k for MPFR values
    if den != 1 << k:
        raise ValueError("not a dyadic rational")
    digits = num * 5**k  # num/2^k == digits/10^k
    s = str(digits).rjust(k + 1, "0")
    whole, frac = s[:-k], s[-k:]
    frac = frac.rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


def interval_from_decimal(lo: str, hi: str, precision: int) -> Interval:
    """Rebuild an interval from exact decimal endpoint strings (outward)."""
    return Interval.from_endpoints(Fraction(lo), Fraction(hi), precision)


def display_string(iv: Interval, digits: int = 24) -> str:
    """Human-readable [lo, hi] trimmed to about `digits` significant digits.

    Display only; trimming rounds lo down and hi up so the printed interval
    still contains the stored one.
    """
    down, up = _ctxs(max(16, int(digits * 3.33)))
    lo = gmpy2.mpfr(iv.lo, context=down)
    hi = gmpy2.mpfr(iv.hi, context=up)
    return f"[{lo}, {hi}]"


# -- rigorous constants ------------------------------------------------


def const_euler_gamma(precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of the Euler-Mascheroni constant gamma = 0.57721...

    Error bound: MPFR's const_euler is correctly rounded in the requested
    direction (it runs the Brent-McMillan binary-splitting scheme internally
    with a proven remainder bound), so [RNDD result, RNDU result] contains
    gamma and has width at most 2 ulp < 2^(-precision+2).
    """
    if precision < 8:
        raise ValueError("precision must be >= 8 bits")
    down, up = _ctxs(precision)
    return Interval(down.const_euler(), up.const_euler(), precision)


def const_exp_gamma(precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of e^gamma = 1.78107..., the threshold of every criterion here."""
    g = const_euler_gamma(precision)
    return g.exp()


def const_pi(precision: int = DEFAULT_PRECISION) -> Interval:
    down, up = _ctxs(precision)
    return Interval(down.const_pi(), up.const_pi(), precision)


# -- adaptive-precision comparisons ------------------------------------


class Verdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDECIDED = "undecided"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class CriterionVerdict:
    """Outcome of one inequality check.

    HOLDS/FAILS are only ever produced from disjoint enclosures (or, for the
    non-strict directions, touching ones), so they are certificates.
    UNDECIDED means the escalation cap was reached with overlapping
    enclosures; it is a value, not an error.
    """

    state: Verdict
    precision_used: int
    margin: Interval

    @property
    def holds(self) -> bool:
        return self.state is Verdict.HOLDS

    @property
    def fails(self) -> bool:
        return self.state is Verdict.FAILS


Producer = Callable[[int], Interval]


def as_producer(x) -> Producer:
    """Wrap a constant (Interval or exact value) as a precision->Interval producer."""
    if callable(x):
        return x
    if isinstance(x, Interval):
        fixed = x
        return lambda precision: fixed
    value = _exact(x)
    return lambda precision: Interval.exact(value, precision)


_STRICT = {"<", ">"}
_DIRECTIONS = {"<", ">", "<=", ">="}


def compare(
    a,
    b,
    direction: str = "<",
    *,
    start_precision: int = DEFAULT_PRECISION,
    precision_cap: int = MAX_PRECISION,
) -> CriterionVerdict:
    """Decide `a direction b` by adaptive-precision enclosure separation.

    `a` and `b` are Interval producers (precision -> Interval), or constants.
    Precision doubles until the enclosures separate or `precision_cap` is
    exceeded.  Domain hiccups that higher precision can cure (division by an
    interval still containing 0, log of an enclosure touching 0) trigger
    escalation instead of an exception.

    The margin of the verdict is the enclosure of b - a (for "<", "<=") or
    a - b (for ">", ">="), i.e. positive when the asserted direction holds.
    """
    if direction not in _DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    pa, pb = as_producer(a), as_producer(b)
    swap = direction in (">", ">=")
    strict = direction in _STRICT

    precision = start_precision
    last_margin = None
    while True:
        try:
            ia, ib = pa(precision), pb(precision)
            if swap:
                ia, ib = ib, ia
            margin = ib - ia
            last_margin = margin
        except (IntervalZeroDivision, IntervalDomainError):
            margin = None
        if margin is not None:
            if strict:
                if ia.certainly_lt(ib):
                    return CriterionVerdict(Verdict.HOLDS, precision, margin)
                if ia.certainly_ge(ib):  # a >= b certified => a < b is false
                    return CriterionVerdict(Verdict.FAILS, precision, margin)
            else:
                if ia.certainly_le(ib):
                    return CriterionVerdict(Verdict.HOLDS, precision, margin)
                if ia.certainly_gt(ib):
                    return CriterionVerdict(Verdict.FAILS, precision, margin)
        if precision >= precision_cap:
            if last_margin is None:
                last_margin = Interval.from_endpoints(-1, 1, start_precision)
            return CriterionVerdict(Verdict.UNDECIDED, precision, last_margin)
        precision = min(precision * 2, precision_cap)
