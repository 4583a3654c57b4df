"""Domain error hierarchy shared by every module.

Each error carries a machine code and the HTTP status the API layer maps
it to. Handlers must never let one of these surface as a 5xx.
"""

from __future__ import annotations


class UuisError(Exception):
    """Base class for modeled domain failures."""

    http_status = 500
    code = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ValidationError(UuisError):
    http_status = 400
    code = "validation"


class AuthenticationError(UuisError):
    http_status = 401
    code = "authentication"


class AuthorizationError(UuisError):
    http_status = 403
    code = "authorization"


class NotFoundError(UuisError):
    http_status = 404
    code = "not_found"


class ConflictError(UuisError):
    """The request contradicts current persistent state."""

    http_status = 409
    code = "conflict"


class DuplicateError(ConflictError):
    code = "duplicate"


class StaleVersionError(ConflictError):
    code = "stale_version"


class TransitionError(ConflictError):
    code = "illegal_transition"


class InUseError(ConflictError):
    """Guarded delete refused while references exist."""

    code = "in_use"


class CapacityError(ValidationError):
    """A generated identifier would overflow its fixed width."""

    code = "capacity"
