"""Field validation helpers shared by the domain services."""

from __future__ import annotations

from enum import Enum
from typing import Type, TypeVar

from uuis.errors import ValidationError

TEXT_LIMIT = 255

E = TypeVar("E", bound=Enum)


def parse_enum(enum_cls: Type[E], value, field: str) -> E:
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(member.value for member in enum_cls)
        raise ValidationError(f"{field} must be one of: {allowed}") from None


def require_text(value, field: str, *, max_len: int = TEXT_LIMIT) -> str:
    if not isinstance(value, str) or not value.strip():
        raise ValidationError(f"{field} must be non-empty text")
    if len(value) > max_len:
        raise ValidationError(f"{field} exceeds {max_len} characters")
    return value


def optional_text(value, field: str, *, max_len: int = TEXT_LIMIT) -> str | None:
    if value is None:
        return None
    if not isinstance(value, str):
        raise ValidationError(f"{field} must be text")
    if len(value) > max_len:
        raise ValidationError(f"{field} exceeds {max_len} characters")
    return value
