"""Property-level change trail.

Every mutating operation records what changed inside the same transaction
as the mutation itself: one entry for an INSERT or DELETE, one entry per
changed property for an UPDATE, each carrying the old and new display
values. Entries are append-only; nothing in the system mutates or deletes
them.
"""

from __future__ import annotations

from contextvars import ContextVar
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Sequence

from uuis.errors import AuthorizationError
from uuis.pagination import Page, paginate
from uuis.storage import Store, Transaction
from uuis.timestamps import format_ts, now_utc

if TYPE_CHECKING:
    from uuis.security import SecurityService, User

# Request path of the HTTP call that caused the change, when there is one.
# The API layer sets it per request; direct library callers leave it unset.
current_request_uri: ContextVar[str | None] = ContextVar("current_request_uri", default=None)

VALUE_LIMIT = 255


class AuditEvent(str, Enum):
    INSERT = "INSERT"
    UPDATE = "UPDATE"
    DELETE = "DELETE"


class AuditContractError(RuntimeError):
    """record_change was invoked outside the mutating transaction."""


@dataclass(frozen=True)
class AuditEntry:
    id: int
    actor: str | None
    event_name: AuditEvent
    class_name: str
    persisted_object_id: int
    persisted_object_version: int | None
    property_name: str | None
    old_value: str | None
    new_value: str | None
    uri: str | None
    date_created: str
    last_updated: str


def _clip(value: str | None) -> str | None:
    if value is None:
        return None
    return value[:VALUE_LIMIT]


class AuditService:
    def __init__(self, store: Store):
        self.store = store

    def record_change(
        self,
        txn: Transaction,
        *,
        actor: str | None,
        event: AuditEvent,
        class_name: str,
        object_id: int,
        object_version: int | None = None,
        diffs: Sequence[tuple[str, str | None, str | None]] = (),
        uri: str | None = None,
    ) -> list[AuditEntry]:
        """Append entries describing one mutation.

        Must run inside the transaction that performs the mutation, so the
        domain write and its trail commit or roll back together.
        """
        if not isinstance(txn, Transaction) or not txn.active:
            raise AuditContractError("record_change requires the mutating transaction")
        if uri is None:
            uri = current_request_uri.get()
        now = format_ts(now_utc())
        entries: list[AuditEntry] = []
        if event is AuditEvent.UPDATE:
            rows = [(prop, _clip(old), _clip(new)) for prop, old, new in diffs]
        else:
            rows = [(None, None, None)]
        for prop, old, new in rows:
            entry_id = txn.insert(
                "audit_log",
                actor=actor,
                event_name=event.value,
                class_name=class_name,
                persisted_object_id=object_id,
                persisted_object_version=object_version,
                property_name=prop,
                old_value=old,
                new_value=new,
                uri=uri,
                date_created=now,
                last_updated=now,
                version=0,
            )
            entries.append(
                AuditEntry(
                    id=entry_id,
                    actor=actor,
                    event_name=event,
                    class_name=class_name,
                    persisted_object_id=object_id,
                    persisted_object_version=object_version,
                    property_name=prop,
                    old_value=old,
                    new_value=new,
                    uri=uri,
                    date_created=now,
                    last_updated=now,
                )
            )
        return entries

    def audit_list(
        self,
        security: "SecurityService",
        actor: "User",
        page: int = 1,
        per_page: int = 10,
        sort: str = "lastUpdated",
        order: str = "desc",
    ) -> Page:
        """Browse the trail, newest first by default.

        Visibility follows the audited entity's owning part: a scoped admin
        sees entries for entities owned inside their scope; entities without
        an owning part (users, roles, structure, types) need level 3.
        """
        if not security.has_permission(actor, "audit.view"):
            raise AuthorizationError("audit.view permission required")
        if sort not in ("lastUpdated",):
            sort = "lastUpdated"
        ascending = order == "asc"

        with self.store.read() as txn:
            rows = txn.query("SELECT * FROM audit_log")
            owners = self._owner_index(txn)
        level = security.compute_level(actor)
        if level < 3:
            scope = security.resolve_scope(actor)
            rows = [
                r
                for r in rows
                if owners.get((r["class_name"], r["persisted_object_id"])) in scope
            ]
        rows.sort(key=lambda r: (r["last_updated"], r["id"]), reverse=not ascending)
        entries = [self._entry(r) for r in rows]
        return paginate(entries, page, per_page)

    def _owner_index(self, txn: Transaction) -> dict[tuple[str, int], int]:
        index: dict[tuple[str, int], int] = {}
        for row in txn.query("SELECT id, owner_id FROM asset"):
            index[("Asset", row["id"])] = row["owner_id"]
        for row in txn.query("SELECT id, owner_id FROM location"):
            index[("Location", row["id"])] = row["owner_id"]
        for row in txn.query("SELECT id, part_assigned_id FROM request"):
            index[("Request", row["id"])] = row["part_assigned_id"]
        return index

    @staticmethod
    def _entry(row) -> AuditEntry:
        return AuditEntry(
            id=row["id"],
            actor=row["actor"],
            event_name=AuditEvent(row["event_name"]),
            class_name=row["class_name"],
            persisted_object_id=row["persisted_object_id"],
            persisted_object_version=row["persisted_object_version"],
            property_name=row["property_name"],
            old_value=row["old_value"],
            new_value=row["new_value"],
            uri=row["uri"],
            date_created=row["date_created"],
            last_updated=row["last_updated"],
        )
