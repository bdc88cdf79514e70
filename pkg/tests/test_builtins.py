from datetime import datetime

import pytest

from compass_kg.query.builtins import (
    DATE_PATTERN,
    UnparseableDateError,
    format_date,
    parse_date,
    weeks_between,
)


class TestParseDate:
    def test_leap_day_parses(self):
        assert parse_date("2020-02-29T00:00:00.000") == datetime(2020, 2, 29)

    def test_non_leap_february_29_rejected(self):
        with pytest.raises(UnparseableDateError):
            parse_date("2021-02-29T00:00:00.000")

    def test_month_13_rejected(self):
        with pytest.raises(UnparseableDateError):
            parse_date("2020-13-01T00:00:00.000")

    def test_wrong_shape_rejected(self):
        with pytest.raises(UnparseableDateError):
            parse_date("2020-01-01")

    def test_round_trip_with_formatting(self):
        lexical = "2021-07-05T13:45:09.250"
        assert format_date(parse_date(lexical)) == lexical

    def test_only_published_pattern_supported(self):
        with pytest.raises(ValueError):
            parse_date("2020-01-01T00:00:00.000", "yyyy-MM-dd")

    def test_milliseconds_preserved(self):
        parsed = parse_date("2020-01-01T00:00:00.123")
        assert parsed.microsecond == 123000


class TestWeeksBetween:
    def test_identical_instants(self):
        d = parse_date("2021-01-01T00:00:00.000")
        assert weeks_between(d, d) == 0

    def test_fourteen_days_is_two_weeks(self):
        begin = parse_date("2021-01-01T00:00:00.000")
        end = parse_date("2021-01-15T00:00:00.000")
        assert weeks_between(end, begin) == 2

    def test_floor_of_partial_week(self):
        begin = parse_date("2021-01-01T00:00:00.000")
        end = parse_date("2021-01-13T23:59:59.999")
        assert weeks_between(end, begin) == 1

    def test_negative_span_floors(self):
        begin = parse_date("2021-01-15T00:00:00.000")
        end = parse_date("2021-01-01T00:00:00.000")
        assert weeks_between(end, begin) == -2

    def test_fixture_counseling_span(self):
        begin = parse_date("2021-01-01T00:00:00.000")
        end = parse_date("2021-10-29T00:00:00.000")
        assert weeks_between(end, begin) == 43

    def test_pattern_constant_matches_published_form(self):
        assert DATE_PATTERN == "yyyy-MM-dd'T'HH:mm:ss.SSS"
