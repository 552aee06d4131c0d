import datetime as dt
import io
import logging
import math

import numpy as np
import pytest
from scipy import stats
from hypothesis import given, settings
from hypothesis import strategies as st

from chartnb.aggregate import (
    TrackRecord,
    aggregate_tracks,
    classify_collaboration,
    read_track_csv,
    summarize,
    write_track_csv,
)
from chartnb.ingest import ChartRow
from chartnb.synth import GeneratorSpec, generate_tracks


@pytest.mark.parametrize("artists,expected", [
    ("Asake", False),
    ("Wizkid, Tems", True),
    ("Rema ft. Selena Gomez", True),
    ("Phyno x Olamide", True),
    ("Fatso", False),
    ("Burna Boy & Ed Sheeran", True),
    ("Davido feat. Musa Keys", True),
    ("Davido Feat Musa Keys", True),
    ("Kizz Daniel FT Tekno", True),
    ("Shallipopi X Odumodublvck", True),
    ("Xenon", False),
    ("Maxx", False),
    ("Rex Feather", False),
    ("Theft", False),
    ("Tiwa with Don", False),
    ("A vs B", False),
    ("A + B", False),
])
def test_classify_collaboration(artists, expected):
    assert classify_collaboration(artists) is expected


def test_classify_rejects_empty():
    with pytest.raises(ValueError):
        classify_collaboration("")


def _row(day, uri, streams, artists="Solo", name="T"):
    return ChartRow(dt.date(2024, 1, day), uri, 1, name, artists, streams)


def test_aggregate_basic():
    rows = [_row(1, "u", 10), _row(2, "u", 20), _row(3, "u", 30)]
    (rec,) = aggregate_tracks(rows)
    assert rec.days_on_chart == 3
    assert rec.total_streams == 60
    assert rec.log_streams == pytest.approx(4.0943445622, rel=1e-10)


def test_aggregate_counts_distinct_dates():
    rows = [_row(1, "u", 10), _row(1, "u", 20)]
    (rec,) = aggregate_tracks(rows)
    assert rec.days_on_chart == 1 and rec.total_streams == 30


def test_conflicting_metadata_uses_earliest(caplog):
    rows = [_row(2, "u", 10, "A, B", "new"), _row(1, "u", 10, "A", "old")]
    with caplog.at_level(logging.WARNING):
        (rec,) = aggregate_tracks(rows)
    assert rec.artist_names == "A" and rec.track_name == "old"
    assert not rec.is_collab
    assert "metadata variants" in caplog.text


def test_sorted_by_uri():
    rows = [_row(1, "b", 5), _row(1, "a", 5), _row(2, "c", 5)]
    assert [r.uri for r in aggregate_tracks(rows)] == ["a", "b", "c"]


row_lists = st.lists(
    st.builds(
        ChartRow,
        date=st.dates(dt.date(2024, 1, 1), dt.date(2024, 1, 20)),
        uri=st.sampled_from(["u1", "u2", "u3", "u4"]),
        rank=st.integers(1, 200),
        track_name=st.sampled_from(["x", "y"]),
        artist_names=st.sampled_from(["Solo", "A, B", "C ft. D"]),
        streams=st.integers(1, 10 ** 7),
    ),
    min_size=1, max_size=40, unique_by=lambda r: (r.date, r.uri),
)


@settings(max_examples=80, deadline=None)
@given(row_lists, st.randoms(use_true_random=False))
def test_aggregate_properties(rows, rnd):
    records = aggregate_tracks(rows)
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    assert aggregate_tracks(shuffled) == records
    assert sum(r.days_on_chart for r in records) == len(rows)
    n_dates = len({r.date for r in rows})
    for r in records:
        assert 1 <= r.days_on_chart <= n_dates
        assert r.total_streams >= r.days_on_chart
        assert math.exp(r.log_streams) == pytest.approx(r.total_streams, rel=1e-9)
        assert r.log_streams == pytest.approx(math.log(r.total_streams), rel=1e-12)


def test_summarize_singleton():
    rec = TrackRecord("u", "t", "A, B", 5, 100, math.log(100), True)
    s = summarize([rec])
    assert s.days_on_chart.mean == 5 and s.total_streams.mean == 100
    assert s.days_on_chart.sd == 0 and not s.sd_defined
    assert s.collab_rate == 1.0 and s.n_tracks == 1


def test_summarize_empty():
    with pytest.raises(ValueError):
        summarize([])


def test_summarize_matches_numpy():
    recs = generate_tracks(GeneratorSpec(n_tracks=50, seed=3)).records
    s = summarize(recs)
    days = np.array([r.days_on_chart for r in recs])
    assert s.days_on_chart.sd == pytest.approx(days.std(ddof=1))
    for v in (s.days_on_chart, s.total_streams, s.log_streams):
        assert v.min <= v.mean <= v.max
    assert 0 <= s.collab_rate <= 1


def test_summarize_synthetic_log_streams_mean():
    # oracle: analytic mean of the generator's truncated normal
    spec = GeneratorSpec(seed=21)
    a = (spec.log_streams_min - spec.log_streams_mean) / spec.log_streams_sd
    b = (spec.log_streams_max - spec.log_streams_mean) / spec.log_streams_sd
    expected = stats.truncnorm.mean(a, b, loc=spec.log_streams_mean, scale=spec.log_streams_sd)
    recs = generate_tracks(spec).records
    assert abs(summarize(recs).log_streams.mean - expected) < 0.1


def test_track_csv_round_trip(tmp_path):
    recs = generate_tracks(GeneratorSpec(n_tracks=30, seed=4)).records
    path = tmp_path / "tracks.csv"
    with open(path, "w", newline="") as fh:
        write_track_csv(recs, fh)
    assert read_track_csv(path) == recs
    header = path.read_text().splitlines()[0]
    assert header == "uri,track_name,artist_names,days_on_chart,total_streams,log_streams,is_collab"


def test_table_format():
    recs = generate_tracks(GeneratorSpec(n_tracks=30, seed=4)).records
    text = summarize(recs).format_table()
    assert "Days on chart" in text and "Collaboration rate" in text
