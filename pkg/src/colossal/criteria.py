"""The inequality verifiers: Robin, Nicolas, the sigma-phi bounds, the Mertens
ratio, and the limit-probe sequences along colossally abundant numbers.

Every verdict is produced by the adaptive enclosure comparison in
:mod:`colossal.intervals`; exhaustive scans factor their windows with a block
sieve and re-derive anything verdict-relevant exactly.  Numbers 2..15 sit in a
separate "degenerate" bucket in range reports: G is defined there, but
log log n is tiny or negative and the inequalities are not informative, so the
bucket keeps headline counterexample lists meaningful without hiding anything.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .champions import ChampionRecord, ca_sequence, ca_walk_up_to_prime
from .factored import (
    FactoredNumber,
    as_factored,
    is_prime,
    primes_up_to,
    theta,
)
from .gronwall import (
    gronwall_G,
    gronwall_G_producer,
    mertens_product,
    mertens_ratio,
)
from .intervals import (
    DEFAULT_PRECISION,
    CriterionVerdict,
    Interval,
    Verdict,
    compare,
    const_exp_gamma,
    const_euler_gamma,
    const_pi,
    decimal_string,
)
from . import sieves
from .store import Journal, JournalEntry

DEGENERATE_MAX = 15  # log log n <= ~1 here; bucketed separately in reports
_SCAN_START_PRECISION = 64


@dataclass(frozen=True)
class Counterexample:
    n: int
    G_enclosure: Interval


@dataclass(frozen=True)
class RangeCheckReport:
    """Result of an exhaustive range scan of one criterion.

    For exhaustive checks the verdict is FAILS exactly when counterexamples is
    non-empty.  `degenerate` lists the n <= 15 entries of the window with
    their individual status, kept out of nothing: those that violate are also
    in `counterexamples`.
    """

    criterion: str
    lo: int
    hi: int | None
    checked_count: int
    counterexamples: tuple[Counterexample, ...]
    degenerate: tuple[tuple[int, str], ...]
    verdict: CriterionVerdict
    certified_horizon: Interval | None = None
    notes: str = ""


@dataclass(frozen=True)
class ProbePoint:
    record: ChampionRecord
    quantity: Interval


@dataclass(frozen=True)
class LimsupProbe:
    """Data emission for a limit statement: quantities along the champion
    sequence next to the limit target.  Probes assert enclosure validity only;
    no convergence rate is claimed."""

    name: str
    points: tuple[ProbePoint, ...]
    target: Interval
    direction: str


# ---------------------------------------------------------------------------
# Robin's inequality  G(n) < e^gamma for n > 5040


def robin_check(n, precision: int = DEFAULT_PRECISION) -> CriterionVerdict:
    """Verdict of G(n) < e^gamma for a single n >= 2."""
    fn = as_factored(n)
    if fn.is_one():
        raise ValueError("G undefined at n = 1")
    return compare(gronwall_G_producer(fn), const_exp_gamma, "<", start_precision=precision)


def _scan_robin_window(args: tuple[int, int]) -> list[tuple[int, str, str, int]]:
    """Worker for one block: (n, G_lo, G_hi, precision) for every violator."""
    lo, hi = args
    out = []
    for n, fac in sieves.block_factored_range(lo, hi):
        fn = FactoredNumber(fac)
        verdict = compare(
            gronwall_G_producer(fn),
            const_exp_gamma,
            "<",
            start_precision=_SCAN_START_PRECISION,
        )
        if not verdict.holds:
            g = gronwall_G(fn, verdict.precision_used)
            out.append((n, decimal_string(g.lo), decimal_string(g.hi), verdict.precision_used))
    return out


def robin_verify_range(
    lo: int,
    hi: int,
    precision: int = DEFAULT_PRECISION,
    journal: Journal | None = None,
    threads: int = 1,
) -> RangeCheckReport:
    """Exhaustively check G(n) < e^gamma on [lo, hi].

    With a journal, spans already recorded for this criterion are skipped and
    newly scanned blocks are appended, so interrupted runs resume; the merged
    report is identical to a fresh full run.
    """
    if not (2 <= lo <= hi):
        raise ValueError("need 2 <= lo <= hi")
    criterion = "robin-range"
    violators: dict[int, tuple[str, str, int]] = {}
    spans_todo = [(lo, hi)]
    if journal is not None:
        spans_todo = journal.uncovered(criterion, lo, hi)
        for entry in journal.entries(criterion):
            a, b = entry.span
            if a > hi or b < lo:
                continue
            for n, g_lo, g_hi, prec in entry.counterexamples:
                if lo <= n <= hi:
                    violators[n] = (g_lo, g_hi, prec)

    blocks: list[tuple[int, int]] = []
    for a, b in spans_todo:
        step = max(sieves.BLOCK, 1)
        for start in range(a, b + 1, step):
            blocks.append((start, min(start + step - 1, b)))

    if threads > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_scan_robin_window, blocks))
    else:
        results = [_scan_robin_window(block) for block in blocks]

    for (a, b), row in zip(blocks, results):
        for n, g_lo, g_hi, prec in row:
            violators[n] = (g_lo, g_hi, prec)
        if journal is not None:
            journal.append(
                JournalEntry.now(
                    criterion=criterion,
                    span=(a, b),
                    verdict="fails" if row else "holds",
                    counterexamples=tuple(row),
                    precision=precision,
                )
            )

    counterexamples = tuple(
        Counterexample(
            n,
            Interval.from_endpoints(Fraction(g_lo), Fraction(g_hi), prec),
        )
        for n, (g_lo, g_hi, prec) in sorted(violators.items())
    )
    degenerate = tuple(
        (n, "violates" if n in violators else "holds")
        for n in range(max(lo, 2), min(hi, DEGENERATE_MAX) + 1)
    )
    state = Verdict.FAILS if counterexamples else Verdict.HOLDS
    margin = (
        counterexamples[0].G_enclosure - const_exp_gamma(precision)
        if counterexamples
        else Interval.exact(0, precision)
    )
    return RangeCheckReport(
        criterion=criterion,
        lo=lo,
        hi=hi,
        checked_count=hi - lo + 1,
        counterexamples=counterexamples,
        degenerate=degenerate,
        verdict=CriterionVerdict(state, precision, margin),
        notes="window endpoints included on both sides",
    )


def robin_verify_ca(
    max_largest_prime: int,
    precision: int = DEFAULT_PRECISION,
    journal: Journal | None = None,
    ca_floor: int = 55440,
) -> RangeCheckReport:
    """Walk the CA numbers whose largest prime factor is <= max_largest_prime
    and check G(N) < e^gamma at every one with N >= ca_floor.

    Between consecutive CA numbers N' < N'' every n satisfies
    G(n) <= max(G(N'), G(N'')), so a clean walk certifies the whole stretch:
    the report claims exactly "G(n) < e^gamma for ca_floor <= n <= H" where H
    is the last CA number walked, returned as a log-enclosure (H itself has
    thousands of digits and is never materialized).
    """
    if max_largest_prime < 11:
        raise ValueError("max_largest_prime must be >= 11")
    counterexamples: list[Counterexample] = []
    checked = 0
    first_index = None
    last_index = None
    horizon: Interval | None = None
    floor_fn = as_factored(ca_floor)
    floor_log = floor_fn.log_interval(precision)
    for record in ca_walk_up_to_prime(max_largest_prime, precision):
        last_index = record.seq_index
        horizon = record.log_n
        if record.log_n.certainly_lt(floor_log):
            continue  # certifiably below the floor; enclosure overlap means "at the floor"
        if first_index is None:
            first_index = record.seq_index
        checked += 1
        verdict = compare(
            gronwall_G_producer(record.n),
            const_exp_gamma,
            "<",
            start_precision=precision,
        )
        if not verdict.holds:
            counterexamples.append(Counterexample(int(record.seq_index), record.G_enclosure))
    state = Verdict.FAILS if counterexamples else Verdict.HOLDS
    zero = Interval.exact(0, precision)
    report = RangeCheckReport(
        criterion="robin-ca",
        lo=ca_floor,
        hi=None,
        checked_count=checked,
        counterexamples=tuple(counterexamples),
        degenerate=(),
        verdict=CriterionVerdict(state, precision, zero),
        certified_horizon=horizon,
        notes=(
            "counterexample entries index the CA sequence; certified claim is "
            f"G(n) < e^gamma for {ca_floor} <= n <= H with log H in the horizon enclosure"
        ),
    )
    if journal is not None and first_index is not None:
        journal.append(
            JournalEntry.now(
                criterion="robin-ca",
                span=(first_index, last_index),
                verdict=str(state),
                counterexamples=(),
                precision=precision,
            )
        )
    return report


# ---------------------------------------------------------------------------
# Nicolas's inequality on primorials


def nicolas_quantity(p: int, precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of (p# / log log p#) / phi(p#) = mertens_product(p) / log theta(p)."""
    return mertens_product(p, precision) / theta(p, precision).log()


def nicolas_check(p: int, precision: int = DEFAULT_PRECISION) -> CriterionVerdict:
    """Verdict of (p#/log log p#)/phi(p#) > e^gamma for a prime p > 2.

    p = 2 is rejected: log log 2# < 0 flips the sign and the comparison as
    stated is vacuous there.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        raise ValueError("p must be > 2 (log log 2# is negative)")
    return compare(
        lambda precision: nicolas_quantity(p, precision),
        const_exp_gamma,
        ">",
        start_precision=precision,
    )


def nicolas_verify_upto(
    p_max: int, precision: int = DEFAULT_PRECISION, journal: Journal | None = None
) -> RangeCheckReport:
    """Check Nicolas's inequality for every prime 2 < p <= p_max.

    A single incremental pass maintains the Mertens product and theta
    enclosures; any prime that fails to separate at the working precision is
    re-checked individually with escalation (none ever needs it).
    """
    if p_max < 3:
        raise ValueError("p_max must be >= 3")
    from .intervals import _ctxs

    down, up = _ctxs(precision)
    egamma = const_exp_gamma(precision)
    prod_lo, prod_hi = gmpy2.mpfr(1), gmpy2.mpfr(1)
    th_lo, th_hi = gmpy2.mpfr(0), gmpy2.mpfr(0)
    counterexamples: list[Counterexample] = []
    checked = 0
    for p in primes_up_to(p_max):
        prod_lo = down.mul(prod_lo, down.div(p, p - 1))
        prod_hi = up.mul(prod_hi, up.div(p, p - 1))
        th_lo = down.add(th_lo, down.log(p))
        th_hi = up.add(th_hi, up.log(p))
        if p == 2:
            continue
        checked += 1
        quantity = Interval(prod_lo, prod_hi, precision) / Interval(
            th_lo, th_hi, precision
        ).log()
        if quantity.certainly_gt(egamma):
            continue
        verdict = nicolas_check(p, precision)
        if not verdict.holds:
            counterexamples.append(Counterexample(p, nicolas_quantity(p, precision)))
    state = Verdict.FAILS if counterexamples else Verdict.HOLDS
    zero = Interval.exact(0, precision)
    if journal is not None:
        journal.append(
            JournalEntry.now(
                criterion="nicolas",
                span=(3, p_max),
                verdict=str(state),
                counterexamples=tuple(
                    (c.n, decimal_string(c.G_enclosure.lo), decimal_string(c.G_enclosure.hi), precision)
                    for c in counterexamples
                ),
                precision=precision,
            )
        )
    return RangeCheckReport(
        criterion="nicolas",
        lo=3,
        hi=p_max,
        checked_count=checked,
        counterexamples=tuple(counterexamples),
        degenerate=(),
        verdict=CriterionVerdict(state, precision, zero),
    )


# ---------------------------------------------------------------------------
# the sharpened gap quantity and the limit probes


def ramanujan_target(precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of -e^gamma (2 sqrt 2 - 4 - gamma + log 4 pi) = -1.393...,
    the proven upper bound for the limsup of the gap quantity below."""
    g = const_euler_gamma(precision)
    eg = g.exp()
    two_sqrt2 = Interval.exact(2, precision).sqrt() * 2
    log_4pi = (const_pi(precision) * 4).log()
    return -(eg * (two_sqrt2 - 4 - g + log_4pi))


def _gap_quantity(fn: FactoredNumber, precision: int) -> Interval:
    ratio = Interval.exact(fn.sigma_over_n(), precision)
    log_n = fn.log_interval(precision)
    ll = log_n.log()
    return (ratio - const_exp_gamma(precision) * ll) * log_n.sqrt()


def ramanujan_quantity(n, precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of (sigma(n)/n - e^gamma log log n) sqrt(log n) for n >= 3.

    Positive exactly where Robin's inequality fails; along champions it sinks
    toward the -1.393... bound.
    """
    fn = as_factored(n)
    if fn.is_one() or (len(fn.factors) == 1 and fn.factors[0] == (2, 1)):
        raise ValueError("gap quantity needs n >= 3")
    return _gap_quantity(fn, precision)


def ramanujan_limsup_probe(ca_count: int, precision: int = DEFAULT_PRECISION) -> LimsupProbe:
    """The gap quantity along the first ca_count colossally abundant numbers."""
    if ca_count < 1:
        raise ValueError("ca_count must be >= 1")
    points = tuple(
        ProbePoint(record, _gap_quantity(record.n, precision))
        for record in ca_sequence(ca_count, precision)
    )
    return LimsupProbe(
        name="gap-quantity",
        points=points,
        target=ramanujan_target(precision),
        direction="limsup bounded above by target",
    )


def gronwall_probe(ca_count: int, precision: int = DEFAULT_PRECISION) -> LimsupProbe:
    """G along the first ca_count colossally abundant numbers, next to e^gamma."""
    if ca_count < 1:
        raise ValueError("ca_count must be >= 1")
    points = tuple(
        ProbePoint(record, record.G_enclosure) for record in ca_sequence(ca_count, precision)
    )
    return LimsupProbe(
        name="gronwall-quotient",
        points=points,
        target=const_exp_gamma(precision),
        direction="limsup equals target; approach from below beyond 5040 (empirical)",
    )


# ---------------------------------------------------------------------------
# the sigma*phi bounds


def sigma_phi_check(lo: int, hi: int, precision: int = DEFAULT_PRECISION) -> RangeCheckReport:
    """Exhaustively verify 6/pi^2 < (sigma(n)/n)(phi(n)/n) < 1 on [lo, hi].

    The product is an exact rational; the upper bound is an exact comparison
    and the lower bound compares against an outward pi^2 enclosure, escalating
    in the (never seen) case of an overlap.
    """
    if lo < 2 or hi < lo:
        raise ValueError("need 2 <= lo <= hi")
    counterexamples: list[Counterexample] = []
    prec = precision
    six_over_pi2 = Interval.exact(6, prec) / (const_pi(prec) * const_pi(prec))
    hi_frac = six_over_pi2.to_fractions()[1]
    for n, fac in sieves.block_factored_range(lo, hi):
        # sigma(n) phi(n) / n^2 telescopes to prod over p^e || n of (1 - p^-(e+1))
        product = Fraction(1)
        for p, e in fac:
            q = p ** (e + 1)
            product *= Fraction(q - 1, q)
        ok_upper = product < 1
        if product > hi_frac:
            ok_lower = True
        else:
            v = compare(
                Interval.exact(product, prec),
                lambda precision: Interval.exact(6, precision)
                / (const_pi(precision) * const_pi(precision)),
                ">",
            )
            ok_lower = v.holds
        if not (ok_upper and ok_lower):
            counterexamples.append(
                Counterexample(n, Interval.exact(product, prec))
            )
    state = Verdict.FAILS if counterexamples else Verdict.HOLDS
    zero = Interval.exact(0, precision)
    return RangeCheckReport(
        criterion="sigma-phi",
        lo=lo,
        hi=hi,
        checked_count=hi - lo + 1,
        counterexamples=tuple(counterexamples),
        degenerate=(),
        verdict=CriterionVerdict(state, precision, zero),
    )


# ---------------------------------------------------------------------------
# Mertens ratio table


def mertens_ratio_table(
    xs: list[int], precision: int = DEFAULT_PRECISION
) -> list[tuple[int, Interval]]:
    """Enclosures of (prod_{p<=x} (1-1/p)^{-1}) / log x for each requested x."""
    out = []
    for x in xs:
        if x < 2:
            raise ValueError("each x must be >= 2")
        out.append((x, mertens_ratio(x, precision)))
    return out
