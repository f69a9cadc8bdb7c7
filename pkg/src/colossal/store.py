"""Persistence: append-only verification journals and champion cache files.

Both formats are line-oriented text so a human can audit or diff them.  Every
journal line carries its own CRC; a torn final line (crash mid-append) is
ignored on reload, a bad line anywhere else is corruption.  Cache files carry
a whole-body SHA-256 trailer and reload to byte-identical re-serialization:
interval endpoints are stored as the exact decimal expansion of their MPFR
values, which round-trips losslessly at the tagged precision.
"""

from __future__ import annotations

import hashlib
import os
import zlib
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction

from .champions import Breakpoint, ChampionRecord
from .factored import FactoredNumber
from .intervals import Interval, decimal_string, interval_from_decimal

FORMAT_VERSION = 1
ENGINE_VERSION = "0.1.0"

_FIELD_SEP = "\t"
_CE_SEP = ";"


class JournalOverlapError(ValueError):
    """New entry's span overlaps an existing span of the same criterion."""


class StoreCorruption(ValueError):
    """Checksum, ordering or structure violation in a journal/cache file."""


# ---------------------------------------------------------------------------
# journal


@dataclass(frozen=True)
class JournalEntry:
    criterion: str
    span: tuple[int, int]  # inclusive, semantics per criterion (n-range or index-range)
    verdict: str
    counterexamples: tuple[tuple[int, str, str, int], ...]  # (n, lo, hi, precision)
    precision: int
    timestamp: str
    engine_version: str = ENGINE_VERSION

    @staticmethod
    def now(criterion, span, verdict, counterexamples, precision) -> "JournalEntry":
        return JournalEntry(
            criterion=criterion,
            span=(int(span[0]), int(span[1])),
            verdict=str(verdict),
            counterexamples=tuple(counterexamples),
            precision=precision,
            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )

    def _payload(self) -> str:
        ces = _CE_SEP.join(f"{n},{lo},{hi},{prec}" for n, lo, hi, prec in self.counterexamples)
        return _FIELD_SEP.join(
            [
                self.criterion,
                str(self.span[0]),
                str(self.span[1]),
                self.verdict,
                ces,
                str(self.precision),
                self.timestamp,
                self.engine_version,
            ]
        )

    def to_line(self) -> str:
        payload = self._payload()
        crc = zlib.crc32(payload.encode())
        return f"{payload}{_FIELD_SEP}crc={crc:08x}"

    @staticmethod
    def from_line(line: str) -> "JournalEntry":
        payload, sep, crc_field = line.rpartition(_FIELD_SEP)
        if not sep or not crc_field.startswith("crc="):
            raise StoreCorruption(f"malformed journal line: {line!r}")
        if f"{zlib.crc32(payload.encode()):08x}" != crc_field[4:]:
            raise StoreCorruption(f"journal line checksum mismatch: {line!r}")
        fields = payload.split(_FIELD_SEP)
        if len(fields) != 8:
            raise StoreCorruption(f"journal line has {len(fields)} fields: {line!r}")
        ces = []
        if fields[4]:
            for chunk in fields[4].split(_CE_SEP):
                n, lo, hi, prec = chunk.split(",")
                ces.append((int(n), lo, hi, int(prec)))
        return JournalEntry(
            criterion=fields[0],
            span=(int(fields[1]), int(fields[2])),
            verdict=fields[3],
            counterexamples=tuple(ces),
            precision=int(fields[5]),
            timestamp=fields[6],
            engine_version=fields[7],
        )


_JOURNAL_HEADER = f"#journal v{FORMAT_VERSION}"


class Journal:
    """Append-only, crash-tolerant journal of verified spans.

    Spans of the same criterion must be pairwise disjoint; appends are flushed
    and fsynced before returning, and a reader never sees a torn entry (the
    final line is dropped unless its CRC verifies).
    """

    def __init__(self, path: str | os.PathLike):
        self.path = os.fspath(path)
        self._entries: list[JournalEntry] = []
        self.truncated_tail = False
        if os.path.exists(self.path):
            self._load()
        else:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(_JOURNAL_HEADER + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def _load(self) -> None:
        with open(self.path, "r", encoding="utf-8") as fh:
            raw = fh.read()
        lines = raw.split("\n")
        if not lines or lines[0] != _JOURNAL_HEADER:
            raise StoreCorruption(f"{self.path}: missing journal header")
        body = lines[1:]
        if body and body[-1] == "":
            body.pop()
        for i, line in enumerate(body):
            try:
                entry = JournalEntry.from_line(line)
            except StoreCorruption:
                if i == len(body) - 1:
                    self.truncated_tail = True  # torn tail from a crash; prior entries stand
                    break
                raise
            self._entries.append(entry)

    def entries(self, criterion: str | None = None) -> list[JournalEntry]:
        if criterion is None:
            return list(self._entries)
        return [e for e in self._entries if e.criterion == criterion]

    def covered(self, criterion: str) -> list[tuple[int, int]]:
        """Merged, sorted union of recorded spans for one criterion."""
        spans = sorted(e.span for e in self.entries(criterion))
        merged: list[tuple[int, int]] = []
        for a, b in spans:
            if merged and a <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        return merged

    def uncovered(self, criterion: str, lo: int, hi: int) -> list[tuple[int, int]]:
        """Subranges of [lo, hi] not yet covered for this criterion."""
        gaps: list[tuple[int, int]] = []
        cursor = lo
        for a, b in self.covered(criterion):
            if b < lo or a > hi:
                continue
            if a > cursor:
                gaps.append((cursor, min(a - 1, hi)))
            cursor = max(cursor, b + 1)
            if cursor > hi:
                break
        if cursor <= hi:
            gaps.append((cursor, hi))
        return gaps

    def append(self, entry: JournalEntry) -> "Journal":
        a, b = entry.span
        if a > b:
            raise ValueError(f"bad span {entry.span}")
        for other in self.entries(entry.criterion):
            oa, ob = other.span
            if not (b < oa or ob < a):
                raise JournalOverlapError(
                    f"span {entry.span} overlaps recorded {other.span} for {entry.criterion!r}"
                )
        line = entry.to_line()
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        self._entries.append(entry)
        return self


# ---------------------------------------------------------------------------
# champion cache


def _factors_str(n: FactoredNumber) -> str:
    if not n.factors:
        return "1"
    return "*".join(f"{p}^{e}" for p, e in n.factors)


def _factors_parse(text: str) -> FactoredNumber:
    if text == "1":
        return FactoredNumber.one()
    pairs = []
    for part in text.split("*"):
        p, _, e = part.partition("^")
        pairs.append((int(p), int(e)))
    return FactoredNumber.from_factors(pairs)


def _bp_str(bp: Breakpoint | None) -> str:
    return "-" if bp is None else f"{bp.s}|{bp.prime}|{bp.exponent}"


def _bp_parse(text: str) -> Breakpoint | None:
    if text == "-":
        return None
    s, p, r = text.split("|")
    return Breakpoint(Fraction(s), int(p), int(r))


def _iv_str(iv: Interval | None) -> str:
    if iv is None:
        return "-"
    return f"{decimal_string(iv.lo)},{decimal_string(iv.hi)}@{iv.precision}"


def _iv_parse(text: str) -> Interval | None:
    if text == "-":
        return None
    body, _, prec = text.rpartition("@")
    lo, _, hi = body.partition(",")
    # exact decimal expansions of dyadic endpoints: reload is lossless
    return interval_from_decimal(lo, hi, int(prec))


def _record_line(rec: ChampionRecord) -> str:
    return _FIELD_SEP.join(
        [
            str(rec.seq_index if rec.seq_index is not None else "-"),
            rec.kind,
            "-" if rec.s is None else str(rec.s),
            _factors_str(rec.n),
            _bp_str(rec.epsilon_low),
            _bp_str(rec.epsilon_high),
            _iv_str(rec.G_enclosure),
            str(rec.largest_prime),
        ]
    )


def _record_parse(line: str) -> ChampionRecord:
    fields = line.split(_FIELD_SEP)
    if len(fields) != 8:
        raise StoreCorruption(f"champion record has {len(fields)} fields: {line!r}")
    idx, kind, s, factors, lo_bp, hi_bp, g, biggest = fields
    n = _factors_parse(factors)
    return ChampionRecord(
        n=n,
        kind=kind,
        seq_index=None if idx == "-" else int(idx),
        s=None if s == "-" else Fraction(s),
        epsilon_low=_bp_parse(lo_bp),
        epsilon_high=_bp_parse(hi_bp),
        G_enclosure=_iv_parse(g),
        largest_prime=int(biggest),
    )


def cache_save(records: list[ChampionRecord], path: str | os.PathLike) -> None:
    """Write champion records in canonical form with a SHA-256 trailer.

    Records must be strictly ascending (by log n; factorizations are exact so
    the comparison is exact).
    """
    body_lines = [f"#champions v{FORMAT_VERSION} engine={ENGINE_VERSION} count={len(records)}"]
    body_lines += [_record_line(r) for r in records]
    body = "\n".join(body_lines) + "\n"
    _check_ascending(records)
    digest = hashlib.sha256(body.encode()).hexdigest()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(body)
        fh.write(f"#sha256={digest}\n")
        fh.flush()
        os.fsync(fh.fileno())


def cache_load(path: str | os.PathLike) -> list[ChampionRecord]:
    """Reload a champion cache, validating checksum, version and ordering."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read()
    lines = raw.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[-1].startswith("#sha256="):
        raise StoreCorruption(f"{path}: missing checksum trailer (truncated?)")
    body = "\n".join(lines[:-1]) + "\n"
    if hashlib.sha256(body.encode()).hexdigest() != lines[-1][len("#sha256=") :]:
        raise StoreCorruption(f"{path}: checksum mismatch")
    header = lines[0]
    if not header.startswith(f"#champions v{FORMAT_VERSION} "):
        raise StoreCorruption(f"{path}: unsupported cache version: {header!r}")
    records = [_record_parse(line) for line in lines[1:-1]]
    _check_ascending(records)
    return records


def _check_ascending(records: list[ChampionRecord]) -> None:
    prev: ChampionRecord | None = None
    for rec in records:
        if prev is not None and not _record_lt(prev, rec):
            raise StoreCorruption("champion records out of order")
        prev = rec


def _record_lt(a: ChampionRecord, b: ChampionRecord) -> bool:
    fa, fb = dict(a.n.factors), dict(b.n.factors)
    if fa == fb:
        return False
    # ratio test on the exponent difference avoids materializing huge values
    num = 1
    den = 1
    for p in set(fa) | set(fb):
        d = fb.get(p, 0) - fa.get(p, 0)
        if d > 0:
            num *= p**d
        elif d < 0:
            den *= p ** (-d)
    return num > den
