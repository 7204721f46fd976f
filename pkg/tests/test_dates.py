import datetime

import pytest
from hypothesis import given, strategies as st

from cabotage.dates import (
    UNKNOWN,
    FlexDate,
    flexdate_compare,
    flexdate_to_iso,
    parse_flexdate,
    sort_key,
)
from cabotage.errors import MalformedDate, UnknownDate


def test_parse_exact():
    d = parse_flexdate("1787=05=10")
    assert (d.year, d.month, d.day) == (1787, 5, 10)
    assert d.qualifier == "exact"
    assert not d.flagged


def test_parse_before_flagged():
    d = parse_flexdate("1787<10<10!")
    assert (d.year, d.month, d.day) == (1787, 10, 10)
    assert d.qualifier == "before"
    assert d.flagged


def test_parse_after():
    d = parse_flexdate("1787>08>04!")
    assert d.qualifier == "after"
    assert d.flagged


def test_parse_empty_is_unknown():
    d = parse_flexdate("")
    assert d is UNKNOWN
    assert not d.known


def test_parse_mixed_qualifiers_rejected():
    with pytest.raises(MalformedDate):
        parse_flexdate("1787=05>10")


@pytest.mark.parametrize("text", ["17x7=05=10", "1787=13=10", "1787=05=32",
                                  "1787/05/10", "1787=5=10"])
def test_parse_garbage_rejected(text):
    with pytest.raises(MalformedDate):
        parse_flexdate(text)


def test_partial_dates_round_trip():
    for text in ["1787", "1787=05", "1787>05!", "1787!"]:
        assert parse_flexdate(text).serialize() == text


def test_iso_conversion():
    assert flexdate_to_iso(parse_flexdate("1787=05=10")) == "1787-05-10"
    assert flexdate_to_iso(parse_flexdate("1787>08>04!")) == "1787-08-04"
    assert flexdate_to_iso(UNKNOWN) == ""


def test_compare_examples():
    assert flexdate_compare(parse_flexdate("1787=01=05"),
                            parse_flexdate("1787=03=16")) == -1
    assert flexdate_compare(parse_flexdate("1787=06=19"),
                            parse_flexdate("1787=08=04")) == -1
    d = parse_flexdate("1787=05=10")
    assert flexdate_compare(d, d) == 0
    # qualifiers and flags do not affect the comparison itself
    assert flexdate_compare(parse_flexdate("1787<05<10!"),
                            parse_flexdate("1787>05>10")) == 0


def test_compare_unknown_raises():
    with pytest.raises(UnknownDate):
        flexdate_compare(UNKNOWN, parse_flexdate("1787=05=10"))


def test_sort_key_qualifier_tiebreak():
    before = parse_flexdate("1787<05<10")
    exact = parse_flexdate("1787=05=10")
    after = parse_flexdate("1787>05>10")
    assert sort_key(before) < sort_key(exact) < sort_key(after)


@given(st.dates(min_value=datetime.date(1700, 1, 1),
                max_value=datetime.date(1800, 12, 31)),
       st.sampled_from("=<>"), st.booleans())
def test_round_trip_property(day, q, flagged):
    text = f"{day.year:04d}{q}{day.month:02d}{q}{day.day:02d}" + ("!" if flagged else "")
    parsed = parse_flexdate(text)
    assert parsed.serialize() == text
    assert parsed.raw == text


@given(st.lists(st.dates(min_value=datetime.date(1700, 1, 1),
                         max_value=datetime.date(1800, 12, 31)),
                min_size=2, max_size=30))
def test_lexicographic_equals_chronological(days):
    texts = [f"{d.year:04d}={d.month:02d}={d.day:02d}" for d in days]
    by_text = sorted(texts)
    by_date = [t for _, t in sorted(zip(days, texts), key=lambda x: (x[0], x[1]))]
    assert by_text == by_date


def test_serialize_unknown_is_empty():
    assert UNKNOWN.serialize() == ""
    assert FlexDate(raw="").serialize() == ""
