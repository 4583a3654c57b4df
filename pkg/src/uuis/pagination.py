"""Shared pagination container for list endpoints and reports."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, TypeVar

from uuis.errors import ValidationError

T = TypeVar("T")

DEFAULT_PER_PAGE = 20


@dataclass(frozen=True)
class Page:
    rows: tuple
    page: int
    per_page: int
    total: int

    @property
    def pages(self) -> int:
        return max(1, math.ceil(self.total / self.per_page))


def paginate(items: Sequence[T], page: int = 1, per_page: int = DEFAULT_PER_PAGE) -> Page:
    """Slice a fully evaluated result list.

    The caller materializes the filtered result first, so the total and the
    page rows always come from the same snapshot.
    """
    if page < 1:
        raise ValidationError("page must be >= 1")
    if per_page < 1:
        raise ValidationError("per_page must be >= 1")
    start = (page - 1) * per_page
    return Page(rows=tuple(items[start : start + per_page]), page=page, per_page=per_page, total=len(items))
