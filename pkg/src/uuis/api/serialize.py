"""JSON shapes for API responses.

Reference columns are resolved to display names alongside their ids, the
way the list pages show them (owner, location, and type names rather than
bare numbers).
"""

from __future__ import annotations

from uuis.audit import AuditEntry
from uuis.bulkload import RowOutcome
from uuis.inventory import Asset, AssetType, Location, LocationType
from uuis.pagination import Page
from uuis.reports import ReportPage
from uuis.search import SearchHit
from uuis.security import Role, UniversityPart, User
from uuis.system import UuisSystem
from uuis.workflow import Request, RequestBuckets


def _name(system: UuisSystem, table: str, row_id: int | None, column: str = "name") -> str | None:
    if row_id is None:
        return None
    with system.store.read() as txn:
        row = txn.one(f'SELECT "{column}" AS v FROM "{table}" WHERE id = ?', (row_id,))
    return row["v"] if row else None


def part_json(system: UuisSystem, part: UniversityPart, heads: bool = False) -> dict:
    data = {
        "id": part.id,
        "version": part.version,
        "name": part.name,
        "parent_id": part.parent_id,
        "parent_name": _name(system, "university_part", part.parent_id),
        "type": part.type.value,
    }
    if heads:
        data["heads"] = [user_json(system, u) for u in system.security.part_heads(part.id)]
    return data


def user_json(system: UuisSystem, user: User, detailed: bool = False) -> dict:
    data = {
        "id": user.id,
        "version": user.version,
        "username": user.username,
        "name": user.name,
        "level": system.security.compute_level(user),
    }
    if detailed:
        grants = system.security.grants(user.id)
        data["roles"] = sorted(
            filter(None, (_name(system, "role", r) for r in grants.roles))
        )
        data["permissions"] = sorted(system.security.effective_permissions(user.id))
        data["managed_parts"] = sorted(grants.managed_parts)
        data["member_parts"] = sorted(grants.member_parts)
    return data


def role_json(role: Role) -> dict:
    return {
        "id": role.id,
        "version": role.version,
        "name": role.name,
        "permissions": sorted(role.permissions),
    }


def asset_type_json(asset_type: AssetType) -> dict:
    return {
        "id": asset_type.id,
        "version": asset_type.version,
        "name": asset_type.name,
        "description": asset_type.description,
        "properties": [
            {"id": p.id, "name": p.name, "hint": p.hint} for p in asset_type.properties
        ],
    }


def location_type_json(location_type: LocationType) -> dict:
    return {
        "id": location_type.id,
        "version": location_type.version,
        "name": location_type.name,
        "description": location_type.description,
        "properties": [
            {"id": p.id, "name": p.name, "hint": p.hint} for p in location_type.properties
        ],
    }


def asset_json(system: UuisSystem, asset: Asset) -> dict:
    return {
        "id": asset.id,
        "version": asset.version,
        "iufaid": asset.iufaid,
        "legacyid": asset.legacyid,
        "status": asset.status.value,
        "name": asset.name,
        "details": asset.details,
        "serial_number": asset.serial_number,
        "type_id": asset.type_id,
        "type_name": _name(system, "asset_type", asset.type_id),
        "location_id": asset.location_id,
        "location_name": _name(system, "location", asset.location_id),
        "owner_id": asset.owner_id,
        "owner_name": _name(system, "university_part", asset.owner_id),
        "assignee_id": asset.assignee_id,
        "assignee_username": _name(system, "user", asset.assignee_id, "username"),
        "parent_id": asset.parent_id,
        "parent_iufaid": _name(system, "asset", asset.parent_id, "iufaid"),
        "properties": _asset_properties(system, asset),
    }


def _asset_properties(system: UuisSystem, asset: Asset) -> list[dict]:
    out = []
    for prop_id, value in sorted(asset.property_values.items()):
        out.append(
            {
                "property_id": prop_id,
                "name": _name(system, "asset_type_property", prop_id),
                "value": value,
            }
        )
    return out


def location_json(system: UuisSystem, location: Location) -> dict:
    return {
        "id": location.id,
        "version": location.version,
        "name": location.name,
        "description": location.description,
        "type_id": location.type_id,
        "type_name": _name(system, "location_type", location.type_id),
        "parent_location_id": location.parent_location_id,
        "parent_location_name": _name(system, "location", location.parent_location_id),
        "owner_id": location.owner_id,
        "owner_name": _name(system, "university_part", location.owner_id),
        "assignee_id": location.assignee_id,
        "capacity": location.capacity,
        "properties": [
            {
                "property_id": prop_id,
                "name": _name(system, "location_type_property", prop_id),
                "value": value,
            }
            for prop_id, value in sorted(location.property_values.items())
        ],
    }


def request_json(system: UuisSystem, request: Request, subject_iufaid: str | None = None) -> dict:
    if subject_iufaid is None and request.subject_id is not None:
        subject_iufaid = _name(system, "asset", request.subject_id, "iufaid")
    return {
        "id": request.id,
        "version": request.version,
        "title": request.title,
        "description": request.description,
        "comments": request.comments,
        "request_type": request.request_type.value,
        "status": request.status.value,
        "requester_id": request.requester_id,
        "requester_username": _name(system, "user", request.requester_id, "username"),
        "part_assigned_id": request.part_assigned_id,
        "part_assigned_name": _name(system, "university_part", request.part_assigned_id),
        "user_assigned_id": request.user_assigned_id,
        "subject_id": request.subject_id,
        "subject_iufaid": subject_iufaid,
        "submission_date": request.submission_date,
    }


def buckets_json(system: UuisSystem, buckets: RequestBuckets) -> dict:
    return {
        "waiting_approval": [request_json(system, r) for r in buckets.waiting_approval],
        "waiting_execution": [request_json(system, r) for r in buckets.waiting_execution],
        "mine": [request_json(system, r) for r in buckets.mine],
    }


def audit_json(entry: AuditEntry) -> dict:
    return {
        "id": entry.id,
        "actor": entry.actor,
        "event": entry.event_name.value,
        "class_name": entry.class_name,
        "object_id": entry.persisted_object_id,
        "object_version": entry.persisted_object_version,
        "property_name": entry.property_name,
        "old_value": entry.old_value,
        "new_value": entry.new_value,
        "uri": entry.uri,
        "date_created": entry.date_created,
        "last_updated": entry.last_updated,
    }


def hit_json(hit: SearchHit) -> dict:
    return {"entity": hit.entity.value, "id": hit.id, "title": hit.title, "snippet": hit.snippet}


def outcome_json(outcome: RowOutcome) -> dict:
    return {"row": outcome.row_index, "result": outcome.result.value, "message": outcome.message}


def page_json(page: Page, item_fn) -> dict:
    return {
        "rows": [item_fn(item) for item in page.rows],
        "page": page.page,
        "per_page": page.per_page,
        "total": page.total,
        "pages": page.pages,
    }


def report_json(report: ReportPage) -> dict:
    return {
        "columns": list(report.columns),
        "rows": [list(r) for r in report.rows],
        "page": report.page,
        "per_page": report.per_page,
        "total": report.total,
    }
