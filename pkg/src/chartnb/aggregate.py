"""Track-level aggregation of daily chart rows."""

from __future__ import annotations

import csv
import logging
import math
import os
import re
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .ingest import ChartRow

logger = logging.getLogger(__name__)

# comma, ampersand, feat/feat./ft/ft. as standalone words, or a spaced " x "
_COLLAB_PATTERN = re.compile(r",|&|\b(?:feat|ft)\b\.?| x ", re.IGNORECASE)

TRACK_COLUMNS = (
    "uri",
    "track_name",
    "artist_names",
    "days_on_chart",
    "total_streams",
    "log_streams",
    "is_collab",
)


@dataclass(frozen=True)
class TrackRecord:
    uri: str
    track_name: str
    artist_names: str
    days_on_chart: int
    total_streams: int
    log_streams: float
    is_collab: bool


@dataclass(frozen=True)
class VariableStats:
    mean: float
    sd: float
    min: float
    max: float


@dataclass(frozen=True)
class SummaryStats:
    days_on_chart: VariableStats
    total_streams: VariableStats
    log_streams: VariableStats
    collab_rate: float
    n_tracks: int
    sd_defined: bool = True

    def format_table(self) -> str:
        lines = [
            f"{'Variable':<22}{'Mean':>14}{'SD':>14}{'Min':>14}{'Max':>14}",
            _fmt_row("Days on chart", self.days_on_chart, "{:.1f}"),
            _fmt_row("Total streams", self.total_streams, "{:,.0f}"),
            _fmt_row("log total streams", self.log_streams, "{:.3f}"),
            f"{'Collaboration rate':<22}{self.collab_rate:>14.3f}",
            f"{'Tracks':<22}{self.n_tracks:>14d}",
        ]
        if not self.sd_defined:
            lines.append("(single track: SD undefined, shown as 0)")
        return "\n".join(lines)


def _fmt_row(label: str, s: VariableStats, fmt: str) -> str:
    cells = "".join(f"{fmt.format(v):>14}" for v in (s.mean, s.sd, s.min, s.max))
    return f"{label:<22}{cells}"


def classify_collaboration(artist_names: str) -> bool:
    """True if the artist field marks a multi-artist track.

    >>> classify_collaboration("Rema ft. Selena Gomez")
    True
    >>> classify_collaboration("Fatso")
    False
    """
    if not artist_names or not artist_names.strip():
        raise ValueError("artist_names must be non-empty")
    return _COLLAB_PATTERN.search(artist_names) is not None


def aggregate_tracks(rows: Iterable[ChartRow]) -> list[TrackRecord]:
    """Collapse daily rows into one record per uri, sorted by uri.

    Days on chart counts distinct dates. When a uri's metadata changes
    across days, the values from its earliest date are kept.
    """
    groups: dict[str, list[ChartRow]] = {}
    for row in rows:
        groups.setdefault(row.uri, []).append(row)

    records = []
    for uri in sorted(groups):
        group = groups[uri]
        first = min(group, key=lambda r: (r.date, r.track_name, r.artist_names))
        variants = {(r.track_name, r.artist_names) for r in group}
        if len(variants) > 1:
            logger.warning(
                "uri %s has %d metadata variants; using %r from %s",
                uri, len(variants), first.artist_names, first.date,
            )
        total = sum(r.streams for r in group)
        records.append(
            TrackRecord(
                uri=uri,
                track_name=first.track_name,
                artist_names=first.artist_names,
                days_on_chart=len({r.date for r in group}),
                total_streams=total,
                log_streams=math.log(total),
                is_collab=classify_collaboration(first.artist_names),
            )
        )
    return records


def _stats(values: np.ndarray) -> VariableStats:
    sd = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    return VariableStats(float(np.mean(values)), sd, float(np.min(values)), float(np.max(values)))


def summarize(records: Sequence[TrackRecord]) -> SummaryStats:
    """Mean, sample SD, min and max per variable plus the collaboration rate."""
    if not records:
        raise ValueError("cannot summarize an empty record list")
    days = np.array([r.days_on_chart for r in records], dtype=float)
    streams = np.array([r.total_streams for r in records], dtype=float)
    logs = np.array([r.log_streams for r in records], dtype=float)
    collab = np.array([r.is_collab for r in records], dtype=float)
    return SummaryStats(
        days_on_chart=_stats(days),
        total_streams=_stats(streams),
        log_streams=_stats(logs),
        collab_rate=float(collab.mean()),
        n_tracks=len(records),
        sd_defined=len(records) > 1,
    )


def write_track_csv(records: Iterable[TrackRecord], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(TRACK_COLUMNS)
    for r in records:
        writer.writerow([
            r.uri, r.track_name, r.artist_names, r.days_on_chart,
            r.total_streams, repr(r.log_streams), int(r.is_collab),
        ])


def read_track_csv(path: str | os.PathLike) -> list[TrackRecord]:
    """Load a track-level CSV as written by :func:`write_track_csv`.

    ``log_streams`` is recomputed from ``total_streams``; ``is_collab`` is
    taken from the file (0/1).
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = {f.strip().lower(): f for f in reader.fieldnames or []}
        need = ("uri", "days_on_chart", "total_streams", "is_collab")
        missing = [c for c in need if c not in fields]
        if missing:
            raise ValueError(f"track CSV missing column(s): {', '.join(missing)}")
        records = []
        for raw in reader:
            get = lambda c, default="": raw.get(fields.get(c, c), default)  # noqa: E731
            total = int(get("total_streams"))
            records.append(
                TrackRecord(
                    uri=get("uri"),
                    track_name=get("track_name"),
                    artist_names=get("artist_names"),
                    days_on_chart=int(get("days_on_chart")),
                    total_streams=total,
                    log_streams=math.log(total),
                    is_collab=get("is_collab").strip() in ("1", "true", "True"),
                )
            )
    return records
