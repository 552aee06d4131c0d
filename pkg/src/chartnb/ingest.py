"""Parsing and validation of daily Top-200 chart exports.

One CSV row is one track on one chart day. Columns are resolved by header
name (case-insensitive) and extra columns are ignored.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import os
from dataclasses import dataclass
from typing import Iterable, TextIO

REQUIRED_COLUMNS = ("date", "uri", "rank", "track_name", "artist_names", "streams")
MAX_RANK = 200


class ChartFormatError(ValueError):
    """Raised for structurally unusable input, or any bad row in strict mode."""


@dataclass(frozen=True)
class ChartRow:
    date: dt.date
    uri: str
    rank: int
    track_name: str
    artist_names: str
    streams: int


@dataclass(frozen=True)
class DatasetReport:
    n_rows: int
    n_unique_tracks: int
    date_min: dt.date | None
    date_max: dt.date | None
    n_rejected_rows: int


def _parse_int(text: str) -> int:
    text = text.strip()
    # int() would accept "1_000"; chart exports never use that
    if not text or "_" in text:
        raise ValueError(f"not an integer: {text!r}")
    return int(text)


def _parse_row(raw: dict[str, str]) -> ChartRow:
    try:
        date = dt.date.fromisoformat(raw["date"].strip())
    except ValueError:
        raise ValueError(f"unparseable date {raw['date']!r}") from None
    try:
        rank = _parse_int(raw["rank"])
    except ValueError:
        raise ValueError(f"non-integer rank {raw['rank']!r}") from None
    try:
        streams = _parse_int(raw["streams"])
    except ValueError:
        raise ValueError(f"non-integer streams {raw['streams']!r}") from None
    uri = raw["uri"].strip()
    if not uri:
        raise ValueError("empty uri")
    if not 1 <= rank <= MAX_RANK:
        raise ValueError(f"rank {rank} outside [1, {MAX_RANK}]")
    if streams < 1:
        raise ValueError(f"streams {streams} < 1")
    return ChartRow(
        date=date,
        uri=uri,
        rank=rank,
        track_name=raw["track_name"],
        artist_names=raw["artist_names"],
        streams=streams,
    )


def parse_chart_csv(source: TextIO | str, strict: bool = False) -> tuple[list[ChartRow], DatasetReport]:
    """Parse a chart CSV into validated rows.

    ``source`` is an open text stream or the CSV text itself. In lenient
    mode, rows that fail validation (bad date, non-integer rank/streams,
    invariant violations, duplicate ``(date, uri)``) are skipped and
    counted; in strict mode the first one raises :class:`ChartFormatError`.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ChartFormatError("no rows: input is empty") from None

    index: dict[str, int] = {}
    for i, name in enumerate(header):
        index.setdefault(name.strip().lower(), i)
    missing = [c for c in REQUIRED_COLUMNS if c not in index]
    if missing:
        raise ChartFormatError(f"missing required column(s): {', '.join(missing)}")

    rows: list[ChartRow] = []
    seen: set[tuple[dt.date, str]] = set()
    rejected = 0
    for line_no, fields in enumerate(reader, start=2):
        if not fields:
            continue
        try:
            if len(fields) < len(header):
                raise ValueError(f"expected {len(header)} fields, got {len(fields)}")
            row = _parse_row({c: fields[index[c]] for c in REQUIRED_COLUMNS})
            key = (row.date, row.uri)
            if key in seen:
                raise ValueError(f"duplicate entry for {row.uri} on {row.date}")
        except ValueError as exc:
            if strict:
                raise ChartFormatError(f"line {line_no}: {exc}") from None
            rejected += 1
            continue
        seen.add(key)
        rows.append(row)

    return rows, make_report(rows, rejected)


def make_report(rows: Iterable[ChartRow], n_rejected: int = 0) -> DatasetReport:
    rows = list(rows)
    dates = [r.date for r in rows]
    return DatasetReport(
        n_rows=len(rows),
        n_unique_tracks=len({r.uri for r in rows}),
        date_min=min(dates) if dates else None,
        date_max=max(dates) if dates else None,
        n_rejected_rows=n_rejected,
    )


def read_chart_csv(path: str | os.PathLike, strict: bool = False) -> tuple[list[ChartRow], DatasetReport]:
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_chart_csv(fh, strict=strict)


def date_span_days(report: DatasetReport) -> int:
    """Inclusive number of calendar days covered by the report."""
    if report.n_rows == 0 or report.date_min is None or report.date_max is None:
        raise ValueError("no rows")
    return (report.date_max - report.date_min).days + 1


def write_chart_csv(rows: Iterable[ChartRow], fh: TextIO) -> None:
    """Write rows in the column layout :func:`parse_chart_csv` reads."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(REQUIRED_COLUMNS)
    for r in rows:
        writer.writerow([r.date.isoformat(), r.uri, r.rank, r.track_name, r.artist_names, r.streams])
