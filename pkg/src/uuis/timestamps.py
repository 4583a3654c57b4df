"""UTC timestamp handling.

All persisted timestamps are second-precision UTC serialized as
"YYYY-MM-DDTHH:MM:SSZ" (the format report consumers see).
"""

from __future__ import annotations

from datetime import datetime, timezone

from uuis.errors import ValidationError

TS_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def now_utc() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


def format_ts(dt: datetime) -> str:
    if dt.tzinfo is not None:
        dt = dt.astimezone(timezone.utc)
    return dt.strftime(TS_FORMAT)


def parse_ts(text: str) -> datetime:
    return datetime.strptime(text, TS_FORMAT).replace(tzinfo=timezone.utc)


def parse_filter_bound(text: str, *, end: bool = False) -> datetime:
    """Parse a user-supplied range bound.

    Accepts a full timestamp or a bare date; a bare date used as the end of
    a range extends to the last second of that day so ranges stay inclusive.
    """
    text = text.strip()
    try:
        if "T" in text:
            return parse_ts(text if text.endswith("Z") else text + "Z")
        day = datetime.strptime(text, "%Y-%m-%d").replace(tzinfo=timezone.utc)
    except ValueError:
        raise ValidationError(f"unparseable timestamp: {text!r}") from None
    if end:
        return day.replace(hour=23, minute=59, second=59)
    return day
