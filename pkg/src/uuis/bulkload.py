"""Header-driven CSV bulk insert and bulk update of assets.

The first CSV record names the columns; the header is validated before any
row runs, so a misspelled column rejects the whole file instead of silently
binding values to the wrong field. Each data row then runs in its own
transaction: one bad row fails alone and the rest land.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum

from uuis.errors import UuisError, ValidationError
from uuis.inventory import AssetStatus, InventoryService
from uuis.security import SecurityService, User
from uuis.storage import Store

PROPERTY_PREFIX = "prop:"

INSERT_COLUMNS = (
    "legacyid",
    "type",
    "name",
    "details",
    "serial_number",
    "location",
    "owner",
    "status",
    "assignee",
    "parent",
)
REQUIRED_INSERT_COLUMNS = ("name", "type", "location", "owner")
KEY_COLUMNS = ("iufaid", "legacyid")


class RowResult(str, Enum):
    CREATED = "CREATED"
    UPDATED = "UPDATED"
    FAILED = "FAILED"


@dataclass(frozen=True)
class BulkFile:
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class RowOutcome:
    row_index: int  # 1-based over data rows
    result: RowResult
    message: str | None = None


def parse_csv(data: bytes | str) -> BulkFile:
    """Standard CSV: comma separator, double-quote quoting, doubled quotes."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ValidationError(f"file is not UTF-8 text: {exc}") from None
    records = list(csv.reader(io.StringIO(data)))
    records = [r for r in records if r]  # tolerate trailing blank lines
    if not records:
        raise ValidationError("file is empty")
    header = tuple(cell.strip() for cell in records[0])
    if not any(header):
        raise ValidationError("header line is empty")
    rows = []
    for index, record in enumerate(records[1:], start=1):
        if len(record) != len(header):
            raise ValidationError(
                f"row {index} has {len(record)} cells; header has {len(header)}"
            )
        rows.append(tuple(record))
    return BulkFile(header=header, rows=tuple(rows))


def write_csv(header: tuple[str, ...] | list, rows) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue().encode("utf-8")


class BulkLoadService:
    def __init__(self, store: Store, security: SecurityService, inventory: InventoryService):
        self.store = store
        self.security = security
        self.inventory = inventory

    def bulk_insert(self, actor: User, file: BulkFile) -> list[RowOutcome]:
        self._check_header(file.header, require=REQUIRED_INSERT_COLUMNS, keys_allowed=False)
        outcomes = []
        for index, row in enumerate(file.rows, start=1):
            cells = dict(zip(file.header, row))
            try:
                self._insert_row(actor, cells)
                outcomes.append(RowOutcome(row_index=index, result=RowResult.CREATED))
            except UuisError as exc:
                outcomes.append(
                    RowOutcome(row_index=index, result=RowResult.FAILED, message=exc.message)
                )
        return outcomes

    def bulk_update(self, actor: User, file: BulkFile) -> list[RowOutcome]:
        key = self._check_header(file.header, require=(), keys_allowed=True)
        if key is None:
            raise ValidationError("update file needs a key column: iufaid or legacyid")
        outcomes = []
        for index, row in enumerate(file.rows, start=1):
            cells = dict(zip(file.header, row))
            try:
                self._update_row(actor, key, cells)
                outcomes.append(RowOutcome(row_index=index, result=RowResult.UPDATED))
            except UuisError as exc:
                outcomes.append(
                    RowOutcome(row_index=index, result=RowResult.FAILED, message=exc.message)
                )
        return outcomes

    # -- internals ---------------------------------------------------------

    def _check_header(self, header, require, keys_allowed: bool) -> str | None:
        keys = [c for c in header if c in KEY_COLUMNS]
        for column in header:
            if column in INSERT_COLUMNS:
                continue
            if keys_allowed and column in KEY_COLUMNS:
                continue
            if column.startswith(PROPERTY_PREFIX):
                prop = column[len(PROPERTY_PREFIX) :]
                if not self._property_exists(prop):
                    raise ValidationError(f"no asset type declares a property named {prop!r}")
                continue
            raise ValidationError(f"unrecognized column {column!r}")
        missing = [c for c in require if c not in header]
        if missing:
            raise ValidationError(f"missing required columns: {', '.join(missing)}")
        if keys_allowed and len(keys) > 1:
            raise ValidationError("ambiguous key: header lists both iufaid and legacyid")
        return keys[0] if keys else None

    def _property_exists(self, name: str) -> bool:
        with self.store.read() as txn:
            return txn.one("SELECT id FROM asset_type_property WHERE name = ?", (name,)) is not None

    def _insert_row(self, actor: User, cells: dict[str, str]) -> None:
        type_id = self._resolve_type(cells.get("type", ""))
        location_id = self._resolve_location(cells.get("location", ""))
        owner_id = self._resolve_part(cells.get("owner", ""))
        assignee_id = self._resolve_user(cells["assignee"]) if cells.get("assignee") else None
        parent_id = self._resolve_parent(cells["parent"]) if cells.get("parent") else None
        status = cells.get("status") or AssetStatus.AVAILABLE.value
        property_values = self._resolve_properties(type_id, cells)
        self.inventory.asset_create(
            actor,
            name=cells.get("name", ""),
            type_id=type_id,
            location_id=location_id,
            owner_id=owner_id,
            legacyid=cells.get("legacyid") or None,
            details=cells.get("details") or None,
            serial_number=cells.get("serial_number") or None,
            status=status,
            assignee_id=assignee_id,
            parent_id=parent_id,
            property_values=property_values,
        )

    def _update_row(self, actor: User, key: str, cells: dict[str, str]) -> None:
        key_value = cells.get(key, "").strip()
        if not key_value:
            raise ValidationError(f"blank {key} key cell")
        with self.store.read() as txn:
            row = txn.one(f"SELECT id, type_id, version FROM asset WHERE {key} = ?", (key_value,))
        if row is None:
            raise ValidationError(f"no asset with {key} {key_value!r}")
        changes: dict[str, object] = {}
        for column, value in cells.items():
            if column == key or not value.strip():
                continue  # blank cells leave the field unchanged
            if column == "type":
                raise ValidationError("asset type is fixed at creation")
            elif column == "name":
                changes["name"] = value
            elif column == "details":
                changes["details"] = value
            elif column == "serial_number":
                changes["serial_number"] = value
            elif column == "status":
                changes["status"] = value
            elif column == "legacyid":
                changes["legacyid"] = value
            elif column == "location":
                changes["location_id"] = self._resolve_location(value)
            elif column == "owner":
                changes["owner_id"] = self._resolve_part(value)
            elif column == "assignee":
                changes["assignee_id"] = self._resolve_user(value)
            elif column == "parent":
                changes["parent_id"] = self._resolve_parent(value)
            elif column.startswith(PROPERTY_PREFIX):
                prop_id = self._resolve_property(row["type_id"], column[len(PROPERTY_PREFIX) :])
                changes.setdefault("property_values", {})[prop_id] = value  # type: ignore[union-attr]
        self.inventory.asset_edit(actor, row["id"], changes)

    def _resolve_type(self, name: str) -> int:
        with self.store.read() as txn:
            rows = txn.query("SELECT id FROM asset_type WHERE name = ?", (name,))
        if not rows:
            raise ValidationError(f"unknown asset type {name!r}")
        if len(rows) > 1:
            raise ValidationError(f"asset type name {name!r} is ambiguous")
        return rows[0]["id"]

    def _resolve_location(self, name: str) -> int:
        with self.store.read() as txn:
            rows = txn.query("SELECT id FROM location WHERE name = ?", (name,))
        if not rows:
            raise ValidationError(f"unknown location {name!r}")
        if len(rows) > 1:
            raise ValidationError(f"location name {name!r} is ambiguous")
        return rows[0]["id"]

    def _resolve_part(self, name: str) -> int:
        with self.store.read() as txn:
            rows = txn.query("SELECT id FROM university_part WHERE name = ?", (name,))
        if not rows:
            raise ValidationError(f"unknown university part {name!r}")
        if len(rows) > 1:
            raise ValidationError(f"university part name {name!r} is ambiguous")
        return rows[0]["id"]

    def _resolve_user(self, username: str) -> int:
        with self.store.read() as txn:
            row = txn.one('SELECT id FROM "user" WHERE username = ?', (username,))
        if row is None:
            raise ValidationError(f"unknown user {username!r}")
        return row["id"]

    def _resolve_parent(self, iufaid: str) -> int:
        with self.store.read() as txn:
            row = txn.one("SELECT id FROM asset WHERE iufaid = ?", (iufaid,))
        if row is None:
            raise ValidationError(f"no asset with iufaid {iufaid!r}")
        return row["id"]

    def _resolve_property(self, type_id: int, name: str) -> int:
        with self.store.read() as txn:
            row = txn.one(
                "SELECT id FROM asset_type_property WHERE asset_type_id = ? AND name = ?",
                (type_id, name),
            )
        if row is None:
            raise ValidationError(f"asset's type has no property named {name!r}")
        return row["id"]

    def _resolve_properties(self, type_id: int, cells: dict[str, str]) -> dict[int, str]:
        values: dict[int, str] = {}
        for column, value in cells.items():
            if not column.startswith(PROPERTY_PREFIX) or not value.strip():
                continue
            prop_id = self._resolve_property(type_id, column[len(PROPERTY_PREFIX) :])
            values[prop_id] = value
        return values
