"""Canonical daily time series: contiguous calendar dates with finite values.

All pipeline stages exchange data through DateIndexedSeries, so validation
happens once at construction: no gaps, no duplicates, no NaN or infinity.
Dates are plain ``datetime.date`` values (ordinal day arithmetic only, no
time zones) and render as ISO-8601 at the I/O boundary.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Iterable, Iterator

from .errors import (
    DegenerateRangeError,
    DuplicateDateError,
    EmptySeriesError,
    GapError,
    NoOverlapError,
    NonFiniteValueError,
    ParseError,
)

CSV_HEADER = ("date", "value")


@dataclass(frozen=True)
class DateIndexedSeries:
    """Daily real-valued series; day ``i`` is exactly ``start_date + i`` days.

    Immutable after construction: values are stored as a tuple and every
    element is checked to be finite.
    """

    start_date: date
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) == 0:
            raise EmptySeriesError("a series must hold at least one value")
        for v in self.values:
            if not math.isfinite(v):
                raise NonFiniteValueError(f"non-finite value {v!r} rejected at construction")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end_date(self) -> date:
        return self.start_date + timedelta(days=len(self.values) - 1)

    def dates(self) -> Iterator[date]:
        for i in range(len(self.values)):
            yield self.start_date + timedelta(days=i)

    def items(self) -> Iterator[tuple[date, float]]:
        return zip(self.dates(), self.values)

    def value_on(self, day: date) -> float:
        idx = (day - self.start_date).days
        if idx < 0 or idx >= len(self.values):
            raise KeyError(f"{day.isoformat()} outside [{self.start_date}, {self.end_date}]")
        return self.values[idx]

    def covers(self, day: date) -> bool:
        return self.start_date <= day <= self.end_date


def validate_contiguous(raw_rows: Iterable[tuple[date, float]]) -> DateIndexedSeries:
    """Build a series from (date, value) rows, requiring one unbroken daily run.

    Rows may arrive in any order. Raises GapError listing every missing
    date, DuplicateDateError on a repeated date, and NonFiniteValueError
    (via the constructor) on NaN or infinity.
    """
    rows = sorted(raw_rows, key=lambda r: r[0])
    if not rows:
        raise EmptySeriesError("no rows supplied")
    seen: set[date] = set()
    missing: list[date] = []
    prev: date | None = None
    for d, _ in rows:
        if d in seen:
            raise DuplicateDateError(d)
        seen.add(d)
        if prev is not None and d > prev + timedelta(days=1):
            step = prev + timedelta(days=1)
            while step < d:
                missing.append(step)
                step += timedelta(days=1)
        prev = d
    if missing:
        raise GapError(missing)
    return DateIndexedSeries(rows[0][0], tuple(v for _, v in rows))


def minmax_normalize(s: DateIndexedSeries) -> DateIndexedSeries:
    """Affinely map a series onto [0, 1]; min becomes 0 and max becomes 1.

    Raises DegenerateRangeError when all values are equal.
    """
    lo = min(s.values)
    hi = max(s.values)
    if hi == lo:
        raise DegenerateRangeError(f"constant series (all values {lo}) cannot be normalized")
    span = hi - lo
    return DateIndexedSeries(s.start_date, tuple((v - lo) / span for v in s.values))


def align_ranges(
    a: DateIndexedSeries, b: DateIndexedSeries
) -> tuple[DateIndexedSeries, DateIndexedSeries]:
    """Trim both series to the intersection of their date ranges.

    Values inside the intersection are untouched. Raises NoOverlapError
    when the ranges are disjoint.
    """
    start = max(a.start_date, b.start_date)
    end = min(a.end_date, b.end_date)
    if start > end:
        raise NoOverlapError(
            f"no common days between [{a.start_date}, {a.end_date}]"
            f" and [{b.start_date}, {b.end_date}]"
        )

    def cut(s: DateIndexedSeries) -> DateIndexedSeries:
        i = (start - s.start_date).days
        j = (end - s.start_date).days + 1
        return DateIndexedSeries(start, s.values[i:j])

    return cut(a), cut(b)


def parse_iso_date(text: str) -> date:
    """Strict YYYY-MM-DD parser; anything else is a format violation."""
    try:
        return date.fromisoformat(text)
    except ValueError as exc:
        raise ValueError(f"bad date {text!r}: expected YYYY-MM-DD") from exc


def read_series_csv(path: str) -> DateIndexedSeries:
    """Read a ``date,value`` CSV into a validated contiguous series.

    Accepts LF or CRLF, UTF-8, and skips leading lines that begin with
    ``#`` (the provenance comment the CLI emits).
    """
    rows: list[tuple[date, float]] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lineno = 0
        header_seen = False
        for record in csv.reader(fh):
            lineno += 1
            if not record:
                continue
            if record[0].startswith("#"):
                continue
            if not header_seen:
                if tuple(c.strip() for c in record) != CSV_HEADER:
                    raise ParseError(f"expected header 'date,value', got {','.join(record)!r}", lineno)
                header_seen = True
                continue
            if len(record) != 2:
                raise ParseError(f"expected 2 fields, got {len(record)}", lineno)
            try:
                d = parse_iso_date(record[0].strip())
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from exc
            try:
                v = float(record[1])
            except ValueError as exc:
                raise ParseError(f"bad value {record[1]!r}", lineno) from exc
            rows.append((d, v))
    if not header_seen:
        raise ParseError("empty file: missing 'date,value' header", lineno or 1)
    if not rows:
        raise EmptySeriesError(f"{path} holds a header but no rows")
    return validate_contiguous(rows)


def format_value(v: float) -> str:
    """Render a number with 9 significant digits (stable across platforms)."""
    return format(float(v), ".9g")


def write_series_csv(series: DateIndexedSeries, path: str, preamble: str | None = None) -> None:
    """Write a series as ``date,value`` rows; optional ``#`` comment line first."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if preamble is not None:
            fh.write(f"# {preamble}\n")
        fh.write("date,value\n")
        for d, v in series.items():
            fh.write(f"{d.isoformat()},{format_value(v)}\n")
