"""Assets and locations with dynamically typed properties.

Types (asset types, location types) declare named properties; instances
carry text values for the properties of their type. Every asset receives a
generated IUFAID barcode string derived from its row id, assigned in a
follow-up update so the audit trail shows the INSERT and the iufaID
assignment as separate entries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from uuis.audit import AuditEvent, AuditService
from uuis.errors import (
    AuthorizationError,
    CapacityError,
    DuplicateError,
    InUseError,
    NotFoundError,
    StaleVersionError,
    ValidationError,
)
from uuis.pagination import Page, paginate
from uuis.security import SecurityService, User
from uuis.storage import Store, Transaction
from uuis.validation import optional_text, parse_enum, require_text

IUFAID_PATTERN = re.compile(r"^IUFAID[0-9]{10}$")
IUFAID_DIGITS = 10


class AssetStatus(str, Enum):
    AVAILABLE = "AVAILABLE"
    RESERVED = "RESERVED"
    RETIRED = "RETIRED"


@dataclass(frozen=True)
class AssetTypeProperty:
    id: int
    version: int
    name: str
    hint: str
    asset_type_id: int | None


@dataclass(frozen=True)
class AssetType:
    id: int
    version: int
    name: str
    description: str | None
    properties: tuple[AssetTypeProperty, ...] = ()


@dataclass(frozen=True)
class LocationTypeProperty:
    id: int
    version: int
    name: str
    hint: str | None


@dataclass(frozen=True)
class LocationType:
    id: int
    version: int
    name: str
    description: str | None
    properties: tuple[LocationTypeProperty, ...] = ()


@dataclass(frozen=True)
class Asset:
    id: int
    version: int
    iufaid: str | None
    legacyid: str | None
    status: AssetStatus
    name: str
    details: str | None
    serial_number: str | None
    type_id: int
    location_id: int
    owner_id: int
    assignee_id: int | None
    parent_id: int | None
    property_values: dict[int, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Location:
    id: int
    version: int
    name: str
    description: str | None
    type_id: int
    parent_location_id: int | None
    owner_id: int
    assignee_id: int | None
    capacity: int
    property_values: dict[int, str] = field(default_factory=dict)


def generate_iufaid(asset_id: int) -> str:
    """Barcode text for an asset id: IUFAID + the id zero-padded to 10 digits."""
    if asset_id < 1:
        raise ValidationError("asset id must be positive")
    if asset_id >= 10**IUFAID_DIGITS:
        raise CapacityError(f"asset id {asset_id} exceeds the {IUFAID_DIGITS}-digit id space")
    return f"IUFAID{asset_id:0{IUFAID_DIGITS}d}"


# Asset columns that may change after creation, with their audit labels.
_ASSET_EDITABLE = {
    "name": "name",
    "details": "details",
    "serial_number": "serialNumber",
    "status": "status",
    "legacyid": "legacyid",
    "location_id": "location",
    "owner_id": "owner",
    "assignee_id": "assignee",
    "parent_id": "parent",
}

_LOCATION_EDITABLE = {
    "name": "name",
    "description": "description",
    "capacity": "capacity",
    "parent_location_id": "parentLocation",
    "owner_id": "owner",
    "assignee_id": "assignee",
}


class InventoryService:
    def __init__(self, store: Store, security: SecurityService, audit: AuditService):
        self.store = store
        self.security = security
        self.audit = audit

    # -- asset types --------------------------------------------------------

    def asset_type_create(
        self,
        actor: User,
        name: str,
        description: str | None = None,
        properties: Sequence[str | tuple[str, str]] = (),
    ) -> AssetType:
        self.security.require_admin(actor, "asset.create")
        name = require_text(name, "asset type name")
        description = optional_text(description, "description")
        props = self._normalize_properties(properties, default_hint="")
        with self.store.transaction() as txn:
            type_id = txn.insert("asset_type", version=0, name=name, description=description)
            for prop_name, hint in props:
                prop_id = txn.insert(
                    "asset_type_property",
                    version=0,
                    name=prop_name,
                    hint=hint,
                    asset_type_id=type_id,
                )
                txn.insert(
                    "asset_type_asset_type_properties",
                    asset_type_property_id=prop_id,
                    asset_type_id=type_id,
                )
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.INSERT,
                class_name="AssetType",
                object_id=type_id,
                object_version=0,
            )
            return self._asset_type(txn, type_id)

    def asset_type_list(self, actor: User, page: int = 1, per_page: int = 20) -> Page:
        with self.store.read() as txn:
            ids = [r["id"] for r in txn.query("SELECT id FROM asset_type ORDER BY id")]
            types = [self._asset_type(txn, type_id) for type_id in ids]
        return paginate(types, page, per_page)

    def asset_type_show(self, actor: User, type_id: int) -> AssetType:
        with self.store.read() as txn:
            if txn.one("SELECT id FROM asset_type WHERE id = ?", (type_id,)) is None:
                raise NotFoundError(f"no asset type {type_id}")
            return self._asset_type(txn, type_id)

    # -- location types -----------------------------------------------------

    def location_type_create(
        self,
        actor: User,
        name: str,
        description: str | None = None,
        properties: Sequence[str | tuple[str, str]] = (),
    ) -> LocationType:
        self.security.require_admin(actor, "location.create")
        name = require_text(name, "location type name")
        description = optional_text(description, "description")
        props = self._normalize_properties(properties, default_hint=None)
        with self.store.transaction() as txn:
            if txn.one("SELECT id FROM location_type WHERE name = ?", (name,)):
                raise DuplicateError(f"location type {name!r} already exists")
            type_id = txn.insert("location_type", version=0, name=name, description=description)
            for prop_name, hint in props:
                prop_id = txn.insert("location_type_property", version=0, name=prop_name, hint=hint)
                txn.insert(
                    "location_type_location_type_properties",
                    location_type_id=type_id,
                    location_type_property_id=prop_id,
                )
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.INSERT,
                class_name="LocationType",
                object_id=type_id,
                object_version=0,
            )
            return self._location_type(txn, type_id)

    def location_type_list(self, actor: User, page: int = 1, per_page: int = 20) -> Page:
        with self.store.read() as txn:
            ids = [r["id"] for r in txn.query("SELECT id FROM location_type ORDER BY id")]
            types = [self._location_type(txn, type_id) for type_id in ids]
        return paginate(types, page, per_page)

    # -- assets ---------------------------------------------------------------

    def asset_create(
        self,
        actor: User,
        *,
        name: str,
        type_id: int,
        location_id: int,
        owner_id: int,
        legacyid: str | None = None,
        details: str | None = None,
        serial_number: str | None = None,
        status: AssetStatus | str = AssetStatus.AVAILABLE,
        assignee_id: int | None = None,
        parent_id: int | None = None,
        property_values: Mapping[int, str] | None = None,
    ) -> Asset:
        self.security.require_permission(actor, "asset.create", owner_id)
        name = require_text(name, "asset name")
        details = optional_text(details, "details")
        serial_number = optional_text(serial_number, "serial number")
        legacyid = optional_text(legacyid, "legacyid")
        status = parse_enum(AssetStatus, status, "status")
        values = dict(property_values or {})
        with self.store.transaction() as txn:
            asset_type = txn.one("SELECT id FROM asset_type WHERE id = ?", (type_id,))
            if asset_type is None:
                raise ValidationError(f"unknown asset type {type_id}")
            if txn.one("SELECT id FROM location WHERE id = ?", (location_id,)) is None:
                raise ValidationError(f"unknown location {location_id}")
            if txn.one("SELECT id FROM university_part WHERE id = ?", (owner_id,)) is None:
                raise ValidationError(f"unknown owner part {owner_id}")
            if assignee_id is not None and not txn.one(
                'SELECT id FROM "user" WHERE id = ?', (assignee_id,)
            ):
                raise ValidationError(f"unknown assignee {assignee_id}")
            if parent_id is not None and not txn.one(
                "SELECT id FROM asset WHERE id = ?", (parent_id,)
            ):
                raise ValidationError(f"unknown parent asset {parent_id}")
            if legacyid is not None and txn.one(
                "SELECT id FROM asset WHERE legacyid = ?", (legacyid,)
            ):
                raise DuplicateError(f"legacyid {legacyid!r} already exists")
            self._check_property_keys(txn, type_id, values)

            asset_id = txn.insert(
                "asset",
                version=0,
                iufaid=None,
                status=status.value,
                legacyid=legacyid,
                location_id=location_id,
                assignee_id=assignee_id,
                parent_id=parent_id,
                serial_number=serial_number,
                type_id=type_id,
                details=details,
                name=name,
                owner_id=owner_id,
            )
            for prop_id, value in values.items():
                txn.insert(
                    "asset_property",
                    version=0,
                    asset_id=asset_id,
                    value=require_text(value, f"property {prop_id} value"),
                    asset_type_property_id=prop_id,
                )
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.INSERT,
                class_name="Asset",
                object_id=asset_id,
                object_version=0,
            )
            # The barcode derives from the id, so it lands in a follow-up
            # system write: version 0 -> 1, audited without an actor.
            iufaid = generate_iufaid(asset_id)
            txn.execute("UPDATE asset SET iufaid = ?, version = 1 WHERE id = ?", (iufaid, asset_id))
            self.audit.record_change(
                txn,
                actor=None,
                event=AuditEvent.UPDATE,
                class_name="Asset",
                object_id=asset_id,
                object_version=1,
                diffs=[("iufaID", None, iufaid)],
            )
            return self._asset(txn, asset_id)

    def asset_edit(
        self,
        actor: User,
        asset_id: int,
        changes: Mapping[str, object],
        *,
        version: int | None = None,
    ) -> Asset:
        with self.store.transaction() as txn:
            row = txn.one("SELECT * FROM asset WHERE id = ?", (asset_id,))
            if row is None:
                raise NotFoundError(f"no asset {asset_id}")
            self.security.require_permission(actor, "asset.edit", row["owner_id"])
            if version is not None and version != row["version"]:
                raise StaleVersionError(f"asset {asset_id} changed since version {version}")
            unknown = set(changes) - set(_ASSET_EDITABLE) - {"property_values"}
            if unknown:
                if "type_id" in unknown:
                    raise ValidationError("asset type is fixed at creation")
                raise ValidationError(f"unknown asset fields: {', '.join(sorted(unknown))}")

            diffs: list[tuple[str, str | None, str | None]] = []
            sets: dict[str, object] = {}
            for column in _ASSET_EDITABLE:
                if column not in changes:
                    continue
                new = changes[column]
                new = self._validate_asset_field(txn, row, column, new)
                if column == "owner_id" and new != row[column]:
                    # Moving ownership needs scope over the destination too.
                    self.security.require_permission(actor, "asset.edit", new)
                if new != row[column]:
                    diffs.append(
                        (
                            _ASSET_EDITABLE[column],
                            self._display_asset_value(txn, column, row[column]),
                            self._display_asset_value(txn, column, new),
                        )
                    )
                    sets[column] = new
            if "property_values" in changes:
                diffs.extend(
                    self._apply_property_changes(
                        txn,
                        table="asset_property",
                        fk_column="asset_id",
                        prop_column="asset_type_property_id",
                        prop_table="asset_type_property",
                        owner_row_id=asset_id,
                        allowed=self._asset_type_property_ids(txn, row["type_id"]),
                        requested=changes["property_values"],  # type: ignore[arg-type]
                    )
                )
            if not diffs:
                return self._asset(txn, asset_id)
            new_version = row["version"] + 1
            assignments = ", ".join(f'"{c}" = ?' for c in sets)
            params = tuple(sets.values())
            sql = "UPDATE asset SET version = ?"
            if assignments:
                sql += ", " + assignments
            sql += " WHERE id = ? AND version = ?"
            cur = txn.execute(sql, (new_version, *params, asset_id, row["version"]))
            if cur.rowcount != 1:
                raise StaleVersionError(f"asset {asset_id} was modified concurrently")
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.UPDATE,
                class_name="Asset",
                object_id=asset_id,
                object_version=new_version,
                diffs=diffs,
            )
            return self._asset(txn, asset_id)

    def asset_show(self, actor: User, asset_id: int) -> Asset:
        with self.store.read() as txn:
            row = txn.one("SELECT * FROM asset WHERE id = ?", (asset_id,))
            if row is None:
                raise NotFoundError(f"no asset {asset_id}")
            asset = self._asset(txn, asset_id)
        self.security.require_permission(actor, "asset.view", asset.owner_id)
        return asset

    def asset_list(
        self,
        actor: User,
        location_id: int | None = None,
        page: int = 1,
        per_page: int = 20,
    ) -> Page:
        """Assets owned inside the actor's scope, ordered by id."""
        if not self.security.has_permission(actor, "asset.view"):
            raise AuthorizationError("asset.view permission required")
        scope = self.security.resolve_scope(actor)
        with self.store.read() as txn:
            rows = txn.query("SELECT id, owner_id, location_id FROM asset ORDER BY id")
            visible = [
                r["id"]
                for r in rows
                if r["owner_id"] in scope
                and (location_id is None or r["location_id"] == location_id)
            ]
            assets = [self._asset(txn, asset_id) for asset_id in visible]
        return paginate(assets, page, per_page)

    def get_asset(self, asset_id: int) -> Asset:
        with self.store.read() as txn:
            row = txn.one("SELECT id FROM asset WHERE id = ?", (asset_id,))
            if row is None:
                raise NotFoundError(f"no asset {asset_id}")
            return self._asset(txn, asset_id)

    # -- locations -------------------------------------------------------------

    def location_create(
        self,
        actor: User,
        *,
        name: str,
        type_id: int,
        owner_id: int,
        parent_location_id: int | None = None,
        description: str | None = None,
        capacity: int = 0,
        assignee_id: int | None = None,
        property_values: Mapping[int, str] | None = None,
    ) -> Location:
        self.security.require_permission(actor, "location.create", owner_id)
        name = require_text(name, "location name")
        description = optional_text(description, "description")
        if capacity < 0:
            raise ValidationError("capacity must be >= 0")
        values = dict(property_values or {})
        with self.store.transaction() as txn:
            if txn.one("SELECT id FROM location_type WHERE id = ?", (type_id,)) is None:
                raise ValidationError(f"unknown location type {type_id}")
            if txn.one("SELECT id FROM university_part WHERE id = ?", (owner_id,)) is None:
                raise ValidationError(f"unknown owner part {owner_id}")
            if parent_location_id is not None and not txn.one(
                "SELECT id FROM location WHERE id = ?", (parent_location_id,)
            ):
                raise ValidationError(f"unknown parent location {parent_location_id}")
            if assignee_id is not None and not txn.one(
                'SELECT id FROM "user" WHERE id = ?', (assignee_id,)
            ):
                raise ValidationError(f"unknown assignee {assignee_id}")
            allowed = self._location_type_property_ids(txn, type_id)
            bad = set(values) - allowed
            if bad:
                raise ValidationError(f"properties not in location type: {sorted(bad)}")
            location_id = txn.insert(
                "location",
                version=0,
                assignee_id=assignee_id,
                parent_location_id=parent_location_id,
                type_id=type_id,
                description=description,
                name=name,
                owner_id=owner_id,
                capacity=capacity,
            )
            for prop_id, value in values.items():
                txn.insert(
                    "location_property",
                    version=0,
                    location_id=location_id,
                    value=require_text(value, f"property {prop_id} value"),
                    location_type_property_id=prop_id,
                )
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.INSERT,
                class_name="Location",
                object_id=location_id,
                object_version=0,
            )
            return self._location(txn, location_id)

    def location_edit(
        self,
        actor: User,
        location_id: int,
        changes: Mapping[str, object],
        *,
        version: int | None = None,
    ) -> Location:
        with self.store.transaction() as txn:
            row = txn.one("SELECT * FROM location WHERE id = ?", (location_id,))
            if row is None:
                raise NotFoundError(f"no location {location_id}")
            self.security.require_permission(actor, "location.edit", row["owner_id"])
            if version is not None and version != row["version"]:
                raise StaleVersionError(f"location {location_id} changed since version {version}")
            unknown = set(changes) - set(_LOCATION_EDITABLE) - {"property_values"}
            if unknown:
                if "type_id" in unknown:
                    raise ValidationError("location type is fixed at creation")
                raise ValidationError(f"unknown location fields: {', '.join(sorted(unknown))}")
            diffs: list[tuple[str, str | None, str | None]] = []
            sets: dict[str, object] = {}
            for column in _LOCATION_EDITABLE:
                if column not in changes:
                    continue
                new = self._validate_location_field(txn, row, column, changes[column])
                if new != row[column]:
                    diffs.append(
                        (
                            _LOCATION_EDITABLE[column],
                            self._display_location_value(txn, column, row[column]),
                            self._display_location_value(txn, column, new),
                        )
                    )
                    sets[column] = new
            if "property_values" in changes:
                diffs.extend(
                    self._apply_property_changes(
                        txn,
                        table="location_property",
                        fk_column="location_id",
                        prop_column="location_type_property_id",
                        prop_table="location_type_property",
                        owner_row_id=location_id,
                        allowed=self._location_type_property_ids(txn, row["type_id"]),
                        requested=changes["property_values"],  # type: ignore[arg-type]
                    )
                )
            if not diffs:
                return self._location(txn, location_id)
            new_version = row["version"] + 1
            assignments = ", ".join(f'"{c}" = ?' for c in sets)
            sql = "UPDATE location SET version = ?"
            if assignments:
                sql += ", " + assignments
            sql += " WHERE id = ? AND version = ?"
            cur = txn.execute(sql, (new_version, *sets.values(), location_id, row["version"]))
            if cur.rowcount != 1:
                raise StaleVersionError(f"location {location_id} was modified concurrently")
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.UPDATE,
                class_name="Location",
                object_id=location_id,
                object_version=new_version,
                diffs=diffs,
            )
            return self._location(txn, location_id)

    def location_show(self, actor: User, location_id: int) -> Location:
        with self.store.read() as txn:
            row = txn.one("SELECT id FROM location WHERE id = ?", (location_id,))
            if row is None:
                raise NotFoundError(f"no location {location_id}")
            return self._location(txn, location_id)

    def location_list(
        self,
        actor: User,
        parent_location_id: int | None = None,
        page: int = 1,
        per_page: int = 20,
    ) -> Page:
        scope = self.security.resolve_scope(actor)
        with self.store.read() as txn:
            rows = txn.query("SELECT id, owner_id, parent_location_id FROM location ORDER BY id")
            visible = [
                r["id"]
                for r in rows
                if r["owner_id"] in scope
                and (parent_location_id is None or r["parent_location_id"] == parent_location_id)
            ]
            locations = [self._location(txn, lid) for lid in visible]
        return paginate(locations, page, per_page)

    def location_delete(self, actor: User, location_id: int) -> None:
        """Guarded delete: refused while assets reside here or children exist."""
        self.security.require_admin(actor, "location.delete")
        with self.store.transaction() as txn:
            row = txn.one("SELECT * FROM location WHERE id = ?", (location_id,))
            if row is None:
                raise NotFoundError(f"no location {location_id}")
            resident = txn.one("SELECT COUNT(*) AS n FROM asset WHERE location_id = ?", (location_id,))
            if resident["n"]:
                raise InUseError(f"{resident['n']} assets still reside at {row['name']}")
            child = txn.one(
                "SELECT COUNT(*) AS n FROM location WHERE parent_location_id = ?", (location_id,)
            )
            if child["n"]:
                raise InUseError(f"{child['n']} child locations still under {row['name']}")
            txn.execute("DELETE FROM location_property WHERE location_id = ?", (location_id,))
            txn.execute("DELETE FROM location WHERE id = ?", (location_id,))
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.DELETE,
                class_name="Location",
                object_id=location_id,
                object_version=row["version"],
            )

    def get_location(self, location_id: int) -> Location:
        with self.store.read() as txn:
            row = txn.one("SELECT id FROM location WHERE id = ?", (location_id,))
            if row is None:
                raise NotFoundError(f"no location {location_id}")
            return self._location(txn, location_id)

    # -- internals ---------------------------------------------------------

    @staticmethod
    def _normalize_properties(
        properties: Sequence[str | tuple[str, str]], default_hint
    ) -> list[tuple[str, str | None]]:
        seen: set[str] = set()
        result: list[tuple[str, str | None]] = []
        for item in properties:
            if isinstance(item, str):
                prop_name, hint = item, default_hint
            else:
                prop_name, hint = item
            prop_name = require_text(prop_name, "property name")
            if prop_name in seen:
                raise ValidationError(f"duplicate property name {prop_name!r} within one type")
            seen.add(prop_name)
            result.append((prop_name, hint))
        return result

    @staticmethod
    def _asset_type_property_ids(txn: Transaction, type_id: int) -> set[int]:
        rows = txn.query(
            "SELECT id FROM asset_type_property WHERE asset_type_id = ?", (type_id,)
        )
        return {r["id"] for r in rows}

    @staticmethod
    def _location_type_property_ids(txn: Transaction, type_id: int) -> set[int]:
        rows = txn.query(
            "SELECT location_type_property_id AS id"
            " FROM location_type_location_type_properties WHERE location_type_id = ?",
            (type_id,),
        )
        return {r["id"] for r in rows}

    def _check_property_keys(self, txn: Transaction, type_id: int, values: Mapping[int, str]) -> None:
        allowed = self._asset_type_property_ids(txn, type_id)
        bad = set(values) - allowed
        if bad:
            raise ValidationError(f"properties not in asset type: {sorted(bad)}")

    def _validate_asset_field(self, txn: Transaction, row, column: str, value):
        if column == "name":
            return require_text(value, "asset name")
        if column in ("details", "serial_number"):
            return optional_text(value, column)
        if column == "status":
            return parse_enum(AssetStatus, value, "status").value
        if column == "legacyid":
            value = optional_text(value, "legacyid")
            if value is not None:
                clash = txn.one(
                    "SELECT id FROM asset WHERE legacyid = ? AND id != ?", (value, row["id"])
                )
                if clash:
                    raise DuplicateError(f"legacyid {value!r} already exists")
            return value
        if column == "location_id":
            if not txn.one("SELECT id FROM location WHERE id = ?", (value,)):
                raise ValidationError(f"unknown location {value}")
            return value
        if column == "owner_id":
            if not txn.one("SELECT id FROM university_part WHERE id = ?", (value,)):
                raise ValidationError(f"unknown owner part {value}")
            return value
        if column == "assignee_id":
            if value is not None and not txn.one('SELECT id FROM "user" WHERE id = ?', (value,)):
                raise ValidationError(f"unknown assignee {value}")
            return value
        if column == "parent_id":
            if value is not None:
                if not txn.one("SELECT id FROM asset WHERE id = ?", (value,)):
                    raise ValidationError(f"unknown parent asset {value}")
                self._check_asset_parent_cycle(txn, row["id"], value)
            return value
        raise ValidationError(f"unknown asset field {column}")

    @staticmethod
    def _check_asset_parent_cycle(txn: Transaction, asset_id: int, new_parent: int) -> None:
        cursor: int | None = new_parent
        seen: set[int] = set()
        while cursor is not None:
            if cursor == asset_id:
                raise ValidationError("change would make the asset its own ancestor")
            if cursor in seen:
                raise ValidationError("parent chain already contains a cycle")
            seen.add(cursor)
            row = txn.one("SELECT parent_id FROM asset WHERE id = ?", (cursor,))
            cursor = row["parent_id"] if row else None

    def _validate_location_field(self, txn: Transaction, row, column: str, value):
        if column == "name":
            return require_text(value, "location name")
        if column == "description":
            return optional_text(value, "description")
        if column == "capacity":
            if not isinstance(value, int) or value < 0:
                raise ValidationError("capacity must be a non-negative integer")
            return value
        if column == "parent_location_id":
            if value is not None:
                if not txn.one("SELECT id FROM location WHERE id = ?", (value,)):
                    raise ValidationError(f"unknown parent location {value}")
                self._check_location_parent_cycle(txn, row["id"], value)
            return value
        if column == "owner_id":
            if not txn.one("SELECT id FROM university_part WHERE id = ?", (value,)):
                raise ValidationError(f"unknown owner part {value}")
            return value
        if column == "assignee_id":
            if value is not None and not txn.one('SELECT id FROM "user" WHERE id = ?', (value,)):
                raise ValidationError(f"unknown assignee {value}")
            return value
        raise ValidationError(f"unknown location field {column}")

    @staticmethod
    def _check_location_parent_cycle(txn: Transaction, location_id: int, new_parent: int) -> None:
        cursor: int | None = new_parent
        seen: set[int] = set()
        while cursor is not None:
            if cursor == location_id:
                raise ValidationError("change would make the location its own ancestor")
            if cursor in seen:
                raise ValidationError("parent chain already contains a cycle")
            seen.add(cursor)
            row = txn.one("SELECT parent_location_id FROM location WHERE id = ?", (cursor,))
            cursor = row["parent_location_id"] if row else None

    def _apply_property_changes(
        self,
        txn: Transaction,
        *,
        table: str,
        fk_column: str,
        prop_column: str,
        prop_table: str,
        owner_row_id: int,
        allowed: set[int],
        requested: Mapping[int, str | None],
    ) -> list[tuple[str, str | None, str | None]]:
        """Upsert EAV values; None removes. Returns audit diffs."""
        diffs: list[tuple[str, str | None, str | None]] = []
        bad = set(requested) - allowed
        if bad:
            raise ValidationError(f"properties not in type: {sorted(bad)}")
        for prop_id, value in requested.items():
            name_row = txn.one(f"SELECT name FROM {prop_table} WHERE id = ?", (prop_id,))
            label = f"prop:{name_row['name']}"
            existing = txn.one(
                f"SELECT id, value FROM {table} WHERE {fk_column} = ? AND {prop_column} = ?",
                (owner_row_id, prop_id),
            )
            old = existing["value"] if existing else None
            if value is None:
                if existing:
                    txn.execute(f"DELETE FROM {table} WHERE id = ?", (existing["id"],))
                    diffs.append((label, old, None))
                continue
            value = require_text(value, label)
            if existing is None:
                txn.execute(
                    f"INSERT INTO {table} (version, {fk_column}, value, {prop_column})"
                    " VALUES (0, ?, ?, ?)",
                    (owner_row_id, value, prop_id),
                )
                diffs.append((label, None, value))
            elif old != value:
                txn.execute(f"UPDATE {table} SET value = ? WHERE id = ?", (value, existing["id"]))
                diffs.append((label, old, value))
        return diffs

    @staticmethod
    def _display_asset_value(txn: Transaction, column: str, value) -> str | None:
        if value is None:
            return None
        if column == "location_id":
            row = txn.one("SELECT name FROM location WHERE id = ?", (value,))
            return row["name"] if row else str(value)
        if column == "owner_id":
            row = txn.one("SELECT name FROM university_part WHERE id = ?", (value,))
            return row["name"] if row else str(value)
        if column == "assignee_id":
            row = txn.one('SELECT username FROM "user" WHERE id = ?', (value,))
            return row["username"] if row else str(value)
        if column == "parent_id":
            row = txn.one("SELECT iufaid FROM asset WHERE id = ?", (value,))
            return (row["iufaid"] or str(value)) if row else str(value)
        return str(value)

    @staticmethod
    def _display_location_value(txn: Transaction, column: str, value) -> str | None:
        if value is None:
            return None
        if column == "parent_location_id":
            row = txn.one("SELECT name FROM location WHERE id = ?", (value,))
            return row["name"] if row else str(value)
        if column == "owner_id":
            row = txn.one("SELECT name FROM university_part WHERE id = ?", (value,))
            return row["name"] if row else str(value)
        if column == "assignee_id":
            row = txn.one('SELECT username FROM "user" WHERE id = ?', (value,))
            return row["username"] if row else str(value)
        return str(value)

    def _asset(self, txn: Transaction, asset_id: int) -> Asset:
        row = txn.one("SELECT * FROM asset WHERE id = ?", (asset_id,))
        props = txn.query(
            "SELECT asset_type_property_id, value FROM asset_property WHERE asset_id = ?",
            (asset_id,),
        )
        return Asset(
            id=row["id"],
            version=row["version"],
            iufaid=row["iufaid"],
            legacyid=row["legacyid"],
            status=AssetStatus(row["status"]),
            name=row["name"],
            details=row["details"],
            serial_number=row["serial_number"],
            type_id=row["type_id"],
            location_id=row["location_id"],
            owner_id=row["owner_id"],
            assignee_id=row["assignee_id"],
            parent_id=row["parent_id"],
            property_values={p["asset_type_property_id"]: p["value"] for p in props},
        )

    def _location(self, txn: Transaction, location_id: int) -> Location:
        row = txn.one("SELECT * FROM location WHERE id = ?", (location_id,))
        props = txn.query(
            "SELECT location_type_property_id, value FROM location_property WHERE location_id = ?",
            (location_id,),
        )
        return Location(
            id=row["id"],
            version=row["version"],
            name=row["name"],
            description=row["description"],
            type_id=row["type_id"],
            parent_location_id=row["parent_location_id"],
            owner_id=row["owner_id"],
            assignee_id=row["assignee_id"],
            capacity=row["capacity"],
            property_values={p["location_type_property_id"]: p["value"] for p in props},
        )

    def _asset_type(self, txn: Transaction, type_id: int) -> AssetType:
        row = txn.one("SELECT * FROM asset_type WHERE id = ?", (type_id,))
        props = txn.query(
            "SELECT * FROM asset_type_property WHERE asset_type_id = ? ORDER BY id", (type_id,)
        )
        return AssetType(
            id=row["id"],
            version=row["version"],
            name=row["name"],
            description=row["description"],
            properties=tuple(
                AssetTypeProperty(
                    id=p["id"],
                    version=p["version"],
                    name=p["name"],
                    hint=p["hint"],
                    asset_type_id=p["asset_type_id"],
                )
                for p in props
            ),
        )

    def _location_type(self, txn: Transaction, type_id: int) -> LocationType:
        row = txn.one("SELECT * FROM location_type WHERE id = ?", (type_id,))
        props = txn.query(
            "SELECT p.* FROM location_type_property p"
            " JOIN location_type_location_type_properties j ON j.location_type_property_id = p.id"
            " WHERE j.location_type_id = ? ORDER BY p.id",
            (type_id,),
        )
        return LocationType(
            id=row["id"],
            version=row["version"],
            name=row["name"],
            description=row["description"],
            properties=tuple(
                LocationTypeProperty(
                    id=p["id"], version=p["version"], name=p["name"], hint=p["hint"]
                )
                for p in props
            ),
        )
