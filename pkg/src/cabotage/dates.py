"""Uncertain-date micro-format: ``1787=05=10``, ``1787>05>10``, ``1787<05<10``.

The separator qualifies the date (exact / after / before) and an optional
trailing ``!`` flags the value in the source transcription. The fixed-width
layout makes lexicographic order of the raw text equal to chronological
order for same-qualifier dates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import MalformedDate, UnknownDate

QUALIFIER_CHAR = {"exact": "=", "after": ">", "before": "<"}
QUALIFIER_NAME = {v: k for k, v in QUALIFIER_CHAR.items()}
# tiebreak rank for ordering dates that share the same calendar day
_QUALIFIER_RANK = {"before": 0, "exact": 1, "after": 2}

_FULL = re.compile(r"^(\d{4})([=<>])(\d{2})([=<>])(\d{2})(!?)$")
_YEAR_MONTH = re.compile(r"^(\d{4})([=<>])(\d{2})(!?)$")
_YEAR = re.compile(r"^(\d{4})(!?)$")


@dataclass(frozen=True)
class FlexDate:
    raw: str
    year: int | None = None
    month: int | None = None
    day: int | None = None
    qualifier: str = "exact"
    flagged: bool = False

    @property
    def known(self) -> bool:
        return self.year is not None

    def serialize(self) -> str:
        if not self.known:
            return ""
        q = QUALIFIER_CHAR[self.qualifier]
        text = f"{self.year:04d}"
        if self.month is not None:
            text += f"{q}{self.month:02d}"
            if self.day is not None:
                text += f"{q}{self.day:02d}"
        if self.flagged:
            text += "!"
        return text


UNKNOWN = FlexDate(raw="")


def parse_flexdate(text: str) -> FlexDate:
    """Parse a flexible date; empty text yields the unknown date."""
    raw = text.strip()
    if raw == "":
        return UNKNOWN
    m = _FULL.match(raw)
    if m:
        if m.group(2) != m.group(4):
            raise MalformedDate(f"mixed qualifiers in {raw!r}")
        year, month, day = int(m.group(1)), int(m.group(3)), int(m.group(5))
        _check_month_day(raw, month, day)
        return FlexDate(raw=raw, year=year, month=month, day=day,
                        qualifier=QUALIFIER_NAME[m.group(2)],
                        flagged=m.group(6) == "!")
    m = _YEAR_MONTH.match(raw)
    if m:
        month = int(m.group(3))
        _check_month_day(raw, month, 1)
        return FlexDate(raw=raw, year=int(m.group(1)), month=month,
                        qualifier=QUALIFIER_NAME[m.group(2)],
                        flagged=m.group(4) == "!")
    m = _YEAR.match(raw)
    if m:
        return FlexDate(raw=raw, year=int(m.group(1)), flagged=m.group(2) == "!")
    raise MalformedDate(f"unrecognised date text {raw!r}")


def flexdate_to_iso(d: FlexDate) -> str:
    """ISO 8601 text: the qualifier characters become dashes."""
    if not d.known:
        return ""
    text = f"{d.year:04d}"
    if d.month is not None:
        text += f"-{d.month:02d}"
        if d.day is not None:
            text += f"-{d.day:02d}"
    return text


def flexdate_compare(a: FlexDate, b: FlexDate) -> int:
    """-1/0/+1 on the normalized calendar day; qualifiers are ignored."""
    if not a.known or not b.known:
        raise UnknownDate("cannot compare unknown dates")
    ka = (a.year, a.month or 0, a.day or 0)
    kb = (b.year, b.month or 0, b.day or 0)
    return (ka > kb) - (ka < kb)


def sort_key(d: FlexDate) -> tuple:
    """Total-order key: calendar day, then before < exact < after."""
    if not d.known:
        raise UnknownDate("cannot order an unknown date")
    return (d.year, d.month or 0, d.day or 0, _QUALIFIER_RANK[d.qualifier])


def _check_month_day(raw: str, month: int, day: int) -> None:
    if not (1 <= month <= 12):
        raise MalformedDate(f"month out of range in {raw!r}")
    if not (1 <= day <= 31):
        raise MalformedDate(f"day out of range in {raw!r}")
