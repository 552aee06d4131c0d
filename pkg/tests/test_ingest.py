import datetime as dt
import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chartnb.ingest import (
    ChartFormatError,
    ChartRow,
    DatasetReport,
    date_span_days,
    make_report,
    parse_chart_csv,
    write_chart_csv,
)

HEADER = "date,uri,rank,track_name,artist_names,streams\n"

FIXTURE = HEADER + (
    "2024-01-01,spotify:track:a,1,Song A,Asake,120000\n"
    '2024-01-01,spotify:track:b,2,Song B,"Wizkid, Tems",90000\n'
    "2024-01-01,spotify:track:c,0,Song C,Rema,80000\n"
    "2024-01-02,spotify:track:a,1,Song A,Asake,110000\n"
    "2024-01-02,spotify:track:d,2,Song D,Phyno x Olamide,70000\n"
)


def test_lenient_skips_invalid_rank():
    rows, report = parse_chart_csv(FIXTURE)
    assert len(rows) == 4
    assert report.n_rejected_rows == 1
    assert report.n_rows == 4
    assert report.n_unique_tracks == 3
    assert (report.date_min, report.date_max) == (dt.date(2024, 1, 1), dt.date(2024, 1, 2))


def test_strict_rejects_invalid_rank():
    with pytest.raises(ChartFormatError, match="line 4"):
        parse_chart_csv(FIXTURE, strict=True)


def test_quoted_artist_field_keeps_comma():
    rows, _ = parse_chart_csv(FIXTURE)
    assert rows[1].artist_names == "Wizkid, Tems"


def test_empty_after_header():
    rows, report = parse_chart_csv(HEADER)
    assert rows == []
    assert report.n_rows == 0
    with pytest.raises(ValueError, match="no rows"):
        date_span_days(report)


def test_missing_column_is_fatal():
    with pytest.raises(ChartFormatError, match="streams"):
        parse_chart_csv("date,uri,rank,track_name,artist_names\n2024-01-01,u,1,t,a\n")


def test_no_header_is_fatal():
    with pytest.raises(ChartFormatError):
        parse_chart_csv("")


def test_header_case_order_and_extra_columns():
    text = (
        "Streams,Rank,URI,Extra,Artist_Names,Track_Name,DATE\n"
        "500,3,u1,zzz,Solo,Name,2024-05-05\n"
    )
    rows, _ = parse_chart_csv(text)
    assert rows == [ChartRow(dt.date(2024, 5, 5), "u1", 3, "Name", "Solo", 500)]


@pytest.mark.parametrize("bad", [
    "2024-13-01,u,1,t,a,10",   # bad date
    "2024-01-01,u,x,t,a,10",   # non-integer rank
    "2024-01-01,u,1,t,a,1.5",  # non-integer streams
    "2024-01-01,u,201,t,a,10",  # rank out of range
    "2024-01-01,u,1,t,a,0",    # zero streams
    "2024-01-01,,1,t,a,10",    # empty uri
])
def test_row_rejections(bad):
    rows, report = parse_chart_csv(HEADER + bad + "\n")
    assert rows == [] and report.n_rejected_rows == 1
    with pytest.raises(ChartFormatError):
        parse_chart_csv(HEADER + bad + "\n", strict=True)


def test_duplicate_date_uri_keeps_first():
    text = HEADER + "2024-01-01,u,1,t,a,10\n2024-01-01,u,2,t2,a2,20\n"
    rows, report = parse_chart_csv(text)
    assert len(rows) == 1 and rows[0].streams == 10
    assert report.n_rejected_rows == 1


@pytest.mark.parametrize("lo,hi,expected", [
    ("2024-01-01", "2024-12-31", 366),
    ("2024-03-01", "2024-03-01", 1),
    ("2024-02-27", "2024-03-02", 5),
])
def test_date_span_days(lo, hi, expected):
    report = DatasetReport(2, 1, dt.date.fromisoformat(lo), dt.date.fromisoformat(hi), 0)
    assert date_span_days(report) == expected


def test_parse_is_deterministic():
    assert parse_chart_csv(FIXTURE) == parse_chart_csv(FIXTURE)


chart_rows = st.builds(
    ChartRow,
    date=st.dates(dt.date(2020, 1, 1), dt.date(2026, 12, 31)),
    uri=st.text(st.characters(codec="utf-8", exclude_categories=("Cs", "Cc", "Zs", "Zl", "Zp")), min_size=1, max_size=12),
    rank=st.integers(1, 200),
    track_name=st.text(st.characters(codec="utf-8", exclude_categories=("Cs", "Cc")), max_size=15),
    artist_names=st.text(st.characters(codec="utf-8", exclude_categories=("Cs", "Cc")), min_size=1, max_size=20),
    streams=st.integers(1, 10 ** 9),
)


@settings(max_examples=60, deadline=None)
@given(st.lists(chart_rows, max_size=20, unique_by=lambda r: (r.date, r.uri)))
def test_write_parse_round_trip(rows):
    buf = io.StringIO()
    write_chart_csv(rows, buf)
    parsed, report = parse_chart_csv(buf.getvalue(), strict=True)
    assert parsed == rows
    assert report == make_report(rows)
    # every accepted row still satisfies the invariants
    assert all(1 <= r.rank <= 200 and r.streams >= 1 and r.uri for r in parsed)
    assert report.n_unique_tracks <= report.n_rows
