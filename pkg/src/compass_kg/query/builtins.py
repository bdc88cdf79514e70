"""Date builtins backing ofn:weeksBetween and spif:parseDate.

Only the millisecond pattern ``yyyy-MM-dd'T'HH:mm:ss.SSS`` is supported; it is
the one the canned queries quote. Spans are signed: when end precedes begin the
result is the floored negative week count.
"""

from __future__ import annotations

import re
from datetime import datetime

DATE_PATTERN = "yyyy-MM-dd'T'HH:mm:ss.SSS"

_LEXICAL_RE = re.compile(r"(\d{4})-(\d{2})-(\d{2})T(\d{2}):(\d{2}):(\d{2})\.(\d{3})$")


class UnparseableDateError(ValueError):
    pass


def parse_date(lexical: str, pattern: str = DATE_PATTERN) -> datetime:
    """Parse a date literal into a calendar-correct instant.

    Raises UnparseableDateError for values that do not match the pattern or
    name impossible dates (month 13, Feb 30, non-leap Feb 29).
    """
    if pattern != DATE_PATTERN:
        raise ValueError(f"unsupported date pattern {pattern!r}; only {DATE_PATTERN!r} is available")
    m = _LEXICAL_RE.match(lexical.strip())
    if not m:
        raise UnparseableDateError(f"date {lexical!r} does not match {pattern}")
    year, month, day, hour, minute, second, millis = (int(g) for g in m.groups())
    try:
        return datetime(year, month, day, hour, minute, second, millis * 1000)
    except ValueError as exc:
        raise UnparseableDateError(f"date {lexical!r}: {exc}") from None


def format_date(value: datetime) -> str:
    return value.strftime("%Y-%m-%dT%H:%M:%S.") + f"{value.microsecond // 1000:03d}"


def weeks_between(end: datetime, begin: datetime) -> int:
    """Floor of the whole-day span divided by seven, signed."""
    delta = end - begin
    return delta.days // 7
