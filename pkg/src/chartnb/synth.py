"""Synthetic chart data drawn from the fitted generative model.

Covariates follow the track-level marginals of a reference chart year
(log streams ~ Normal(12.735, 2.1) truncated to [9.223, 17.191],
collaboration rate 0.456, independent of each other); days on chart are
drawn from NB(mu, alpha) as a Gamma-Poisson mixture.
"""

from __future__ import annotations

import calendar
import datetime as dt
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy import stats

from .aggregate import TrackRecord, classify_collaboration
from .ingest import MAX_RANK, ChartRow
from .model import RegressionDataset


@dataclass(frozen=True)
class GeneratorSpec:
    n_tracks: int = 1335
    beta: tuple[float, float, float] = (-8.126, -0.074, 0.859)
    alpha: float = 5.037
    log_streams_mean: float = 12.735
    log_streams_sd: float = 2.100
    log_streams_min: float = 9.223
    log_streams_max: float = 17.191
    collab_prob: float = 0.456
    seed: int = 0
    # redraw counts outside [1, max_days]; False draws straight from the model
    truncate: bool = True
    max_days: int = 365
    max_redraws: int = 100

    def __post_init__(self):
        if self.n_tracks < 1:
            raise ValueError("n_tracks must be >= 1")
        if not self.log_streams_min < self.log_streams_max:
            raise ValueError("log-streams truncation bounds must be ordered")
        if not 0.0 <= self.collab_prob <= 1.0:
            raise ValueError("collab_prob must lie in [0, 1]")
        if self.alpha <= 0 or self.log_streams_sd <= 0:
            raise ValueError("alpha and log_streams_sd must be positive")
        if len(self.beta) != 3:
            raise ValueError("beta needs three coefficients")


class SyntheticData(NamedTuple):
    dataset: RegressionDataset
    records: list[TrackRecord]
    n_redrawn: int
    n_clamped: int


def sample_negative_binomial(mu, alpha, rng: np.random.Generator) -> np.ndarray:
    """NB(mean mu, dispersion alpha) draws: Poisson with a Gamma(alpha, rate alpha/mu) rate."""
    mu = np.asarray(mu, dtype=float)
    return rng.poisson(rng.gamma(alpha, mu / alpha))


def generate_tracks(spec: GeneratorSpec = GeneratorSpec()) -> SyntheticData:
    rng = np.random.Generator(np.random.Philox(spec.seed))
    n = spec.n_tracks
    a = (spec.log_streams_min - spec.log_streams_mean) / spec.log_streams_sd
    b = (spec.log_streams_max - spec.log_streams_mean) / spec.log_streams_sd
    x_log = stats.truncnorm.rvs(a, b, loc=spec.log_streams_mean, scale=spec.log_streams_sd,
                                size=n, random_state=rng)
    x_collab = (rng.uniform(size=n) < spec.collab_prob).astype(float)
    mu = np.exp(spec.beta[0] + spec.beta[1] * x_collab + spec.beta[2] * x_log)
    if np.median(mu) > spec.max_days:
        warnings.warn("generator mean exceeds the chart year for most tracks", stacklevel=2)

    y = sample_negative_binomial(mu, spec.alpha, rng)
    n_redrawn = n_clamped = 0
    if spec.truncate:
        for _ in range(spec.max_redraws):
            bad = (y < 1) | (y > spec.max_days)
            if not bad.any():
                break
            n_redrawn += int(bad.sum())
            y[bad] = sample_negative_binomial(mu[bad], spec.alpha, rng)
        bad = (y < 1) | (y > spec.max_days)
        n_clamped = int(bad.sum())
        y = np.clip(y, 1, spec.max_days)

    records = []
    for i in range(n):
        days = int(y[i])
        total = max(int(round(math.exp(x_log[i]))), days, 1)
        artists = f"Artist{i:05d}, Guest{i:05d}" if x_collab[i] else f"Artist{i:05d}"
        records.append(TrackRecord(
            uri=f"synth:track:{i:06d}",
            track_name=f"Track {i:06d}",
            artist_names=artists,
            days_on_chart=days,
            total_streams=total,
            log_streams=math.log(total),
            is_collab=bool(x_collab[i]),
        ))
    return SyntheticData(RegressionDataset.from_records(records), records, n_redrawn, n_clamped)


def split_total(total: int, parts: int, rng: np.random.Generator) -> np.ndarray:
    """Random positive integers summing exactly to ``total``.

    Uniform Dirichlet proportions of the surplus over one-per-part, rounded
    by largest remainder.
    """
    if parts < 1 or total < parts:
        raise ValueError("need total >= parts >= 1")
    surplus = total - parts
    share = rng.dirichlet(np.ones(parts)) * surplus if parts > 1 else np.array([float(surplus)])
    base = np.floor(share).astype(np.int64)
    short = surplus - int(base.sum())
    if short:
        order = np.argsort(-(share - base), kind="stable")
        base[order[:short]] += 1
    return base + 1


def _assign_dates(days: Sequence[int], n_days: int, rng, max_retries: int) -> list[np.ndarray]:
    order = sorted(range(len(days)), key=lambda i: (-days[i], i))
    for _ in range(max_retries):
        capacity = np.full(n_days, MAX_RANK, dtype=float)
        chosen: list[np.ndarray | None] = [None] * len(days)
        for i in order:
            k = days[i]
            open_days = np.flatnonzero(capacity > 0)
            if open_days.size < k:
                break
            w = capacity[open_days]
            pick = rng.choice(open_days, size=k, replace=False, p=w / w.sum())
            capacity[pick] -= 1
            chosen[i] = np.sort(pick)
        else:
            return chosen  # type: ignore[return-value]
    raise ValueError(f"could not fit tracks into {MAX_RANK}-slot daily charts after {max_retries} tries")


def generate_daily_chart(records: Sequence[TrackRecord], year: int = 2024, seed: int = 0,
                         max_retries: int = 20) -> list[ChartRow]:
    """Expand track records into daily chart rows that aggregate back exactly.

    Each track gets ``days_on_chart`` distinct dates in ``year`` and its
    ``total_streams`` split into positive daily counts. Ranks follow
    descending daily streams (ties by uri), with at most 200 tracks a day.
    """
    n_days = 366 if calendar.isleap(year) else 365
    for r in records:
        if not 1 <= r.days_on_chart <= n_days:
            raise ValueError(f"{r.uri}: days_on_chart {r.days_on_chart} outside [1, {n_days}]")
        if r.total_streams < r.days_on_chart:
            raise ValueError(f"{r.uri}: total_streams below days_on_chart")
    rng = np.random.Generator(np.random.Philox(seed))
    dates = _assign_dates([r.days_on_chart for r in records], n_days, rng, max_retries)

    start = dt.date(year, 1, 1)
    by_day: dict[int, list[tuple[int, str, TrackRecord]]] = {}
    for rec, days in zip(records, dates):
        streams = split_total(rec.total_streams, rec.days_on_chart, rng)
        for d, s in zip(days, streams):
            by_day.setdefault(int(d), []).append((int(s), rec.uri, rec))

    rows = []
    for d in sorted(by_day):
        entries = sorted(by_day[d], key=lambda e: (-e[0], e[1]))
        date = start + dt.timedelta(days=d)
        for rank, (s, uri, rec) in enumerate(entries, start=1):
            rows.append(ChartRow(date, uri, rank, rec.track_name, rec.artist_names, s))
    return rows


def check_collab_labels(records: Sequence[TrackRecord]) -> bool:
    """True if every record's flag agrees with the artist-name heuristic."""
    return all(classify_collaboration(r.artist_names) == r.is_collab for r in records)
