"""Paginated, filterable reports with CSV export.

Three reports: assets grouped by location (one count column per asset type,
alphabetical), the request ledger with two-letter status codes, and the
user permission summary. Reports never mutate anything and write no audit
entries.
"""

from __future__ import annotations

from dataclasses import dataclass

from uuis.bulkload import write_csv
from uuis.errors import AuthorizationError, NotFoundError, ValidationError
from uuis.pagination import DEFAULT_PER_PAGE
from uuis.security import SecurityService, User
from uuis.storage import Store, Transaction
from uuis.timestamps import parse_ts
from uuis.workflow import RequestStatus

STATUS_CODES = {
    RequestStatus.EXECUTED: "EX",
    RequestStatus.REJECTED: "RJ",
    RequestStatus.NOT_EXECUTED: "NE",
    RequestStatus.WAITING_APPROVAL: "WA",
    RequestStatus.WAITING_EXECUTION: "WX",
}

CODE_TO_STATUS = {code: status for status, code in STATUS_CODES.items()}


def status_code(status: RequestStatus | str) -> str:
    return STATUS_CODES[RequestStatus(status)]


@dataclass(frozen=True)
class ReportFilter:
    building_id: int | None = None
    room_type_id: int | None = None
    department_id: int | None = None
    status: RequestStatus | None = None
    date_from: object | None = None  # datetime
    date_to: object | None = None
    per_page: int = DEFAULT_PER_PAGE
    page: int = 1


@dataclass(frozen=True)
class ReportPage:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    page: int
    per_page: int
    total: int


def _paginate_report(columns, rows, page: int, per_page: int | None) -> ReportPage:
    if per_page is None:
        return ReportPage(tuple(columns), tuple(rows), page=1, per_page=max(1, len(rows)), total=len(rows))
    if page < 1 or per_page < 1:
        raise ValidationError("page and per_page must be >= 1")
    start = (page - 1) * per_page
    return ReportPage(
        columns=tuple(columns),
        rows=tuple(rows[start : start + per_page]),
        page=page,
        per_page=per_page,
        total=len(rows),
    )


def export_csv(report: ReportPage) -> bytes:
    """Whole-result CSV, header first, bulkload quoting rules."""
    return write_csv(report.columns, report.rows)


class ReportService:
    def __init__(self, store: Store, security: SecurityService):
        self.store = store
        self.security = security

    def assets_by_location(
        self, actor: User, filter: ReportFilter = ReportFilter(), *, paginated: bool = True
    ) -> ReportPage:
        """One row per visible location; counts cover directly resident
        assets only (a floor does not absorb its rooms' counts)."""
        self._require_report(actor)
        scope = self.security.resolve_scope(actor)
        with self.store.read() as txn:
            type_names = [
                r["name"] for r in txn.query("SELECT name FROM asset_type ORDER BY name")
            ]
            locations = txn.query("SELECT * FROM location ORDER BY id")
            location_names = {r["id"]: r["name"] for r in locations}
            type_titles = {
                r["id"]: r["name"] for r in txn.query("SELECT id, name FROM location_type")
            }
            counts: dict[tuple[int, str], int] = {}
            type_by_asset_type: dict[int, str] = {
                r["id"]: r["name"] for r in txn.query("SELECT id, name FROM asset_type")
            }
            for row in txn.query("SELECT location_id, type_id FROM asset"):
                key = (row["location_id"], type_by_asset_type[row["type_id"]])
                counts[key] = counts.get(key, 0) + 1
            subtree = self._location_subtree(txn, filter.building_id) if filter.building_id else None

        columns = ["ID", "Location", "Located At", "LocationType", "Capacity", *type_names]
        rows = []
        for loc in locations:
            if loc["owner_id"] not in scope:
                continue
            if subtree is not None and loc["id"] not in subtree:
                continue
            if filter.room_type_id is not None and loc["type_id"] != filter.room_type_id:
                continue
            located_at = location_names.get(loc["parent_location_id"], "-") if loc[
                "parent_location_id"
            ] else "-"
            rows.append(
                (
                    loc["id"],
                    loc["name"],
                    located_at,
                    type_titles[loc["type_id"]],
                    loc["capacity"],
                    *(counts.get((loc["id"], t), 0) for t in type_names),
                )
            )
        return _paginate_report(columns, rows, filter.page, filter.per_page if paginated else None)

    def requests(
        self, actor: User, filter: ReportFilter = ReportFilter(), *, paginated: bool = True
    ) -> ReportPage:
        self._require_report(actor)
        if filter.date_from and filter.date_to and filter.date_from > filter.date_to:
            raise ValidationError("date_from is after date_to")
        scope = self.security.resolve_scope(actor)
        with self.store.read() as txn:
            requests = txn.query("SELECT * FROM request ORDER BY id")
            usernames = {r["id"]: r["username"] for r in txn.query('SELECT id, username FROM "user"')}
            part_names = {r["id"]: r["name"] for r in txn.query("SELECT id, name FROM university_part")}
            department = (
                self._part_subtree(txn, filter.department_id) if filter.department_id else None
            )
        columns = ["ID", "Requested By", "Property Of", "Description", "comments", "Submitted", "Status"]
        rows = []
        for req in requests:
            if req["part_assigned_id"] not in scope:
                continue
            if department is not None and req["part_assigned_id"] not in department:
                continue
            if filter.status is not None and req["status"] != filter.status.value:
                continue
            submitted = parse_ts(req["submission_date"])
            if filter.date_from and submitted < filter.date_from:
                continue
            if filter.date_to and submitted > filter.date_to:
                continue
            rows.append(
                (
                    req["id"],
                    usernames[req["requester_id"]],
                    part_names[req["part_assigned_id"]],
                    req["description"] or "",
                    req["comments"] or "",
                    req["submission_date"],
                    status_code(req["status"]),
                )
            )
        return _paginate_report(columns, rows, filter.page, filter.per_page if paginated else None)

    def user_permissions(
        self, actor: User, filter: ReportFilter = ReportFilter(), *, paginated: bool = True
    ) -> ReportPage:
        self._require_report(actor)
        level = self.security.compute_level(actor)
        scope = self.security.resolve_scope(actor)
        with self.store.read() as txn:
            users = txn.query('SELECT * FROM "user" ORDER BY id')
            department = (
                self._part_subtree(txn, filter.department_id) if filter.department_id else None
            )
            part_names = {r["id"]: r["name"] for r in txn.query("SELECT id, name FROM university_part")}
        columns = ["Username", "Name", "Level", "Roles", "Permissions", "Managed Parts"]
        rows = []
        for user_row in users:
            grants = self.security.grants(user_row["id"])
            parts = grants.managed_parts | grants.member_parts
            if level < 3 and not (parts & scope) and user_row["id"] != actor.id:
                continue
            if department is not None and not (parts & department):
                continue
            role_names = self._role_names(grants.roles)
            perms = sorted(self.security.effective_permissions(user_row["id"]))
            managed = sorted(part_names[p] for p in grants.managed_parts)
            rows.append(
                (
                    user_row["username"],
                    user_row["name"],
                    self.security.compute_level(user_row["id"]),
                    ", ".join(role_names),
                    " ".join(perms),
                    ", ".join(managed),
                )
            )
        return _paginate_report(columns, rows, filter.page, filter.per_page if paginated else None)

    # -- internals ---------------------------------------------------------

    def _require_report(self, actor: User) -> None:
        if not self.security.has_permission(actor, "report.view"):
            raise AuthorizationError("report.view permission required")

    @staticmethod
    def _location_subtree(txn: Transaction, root_id: int) -> set[int]:
        if txn.one("SELECT id FROM location WHERE id = ?", (root_id,)) is None:
            raise NotFoundError(f"no location {root_id}")
        children: dict[int, list[int]] = {}
        for row in txn.query("SELECT id, parent_location_id FROM location"):
            if row["parent_location_id"] is not None:
                children.setdefault(row["parent_location_id"], []).append(row["id"])
        subtree: set[int] = set()
        frontier = [root_id]
        while frontier:
            current = frontier.pop()
            if current in subtree:
                continue
            subtree.add(current)
            frontier.extend(children.get(current, ()))
        return subtree

    @staticmethod
    def _part_subtree(txn: Transaction, root_id: int) -> set[int]:
        if txn.one("SELECT id FROM university_part WHERE id = ?", (root_id,)) is None:
            raise NotFoundError(f"no university part {root_id}")
        children: dict[int, list[int]] = {}
        for row in txn.query("SELECT id, parent_id FROM university_part"):
            if row["parent_id"] is not None:
                children.setdefault(row["parent_id"], []).append(row["id"])
        subtree: set[int] = set()
        frontier = [root_id]
        while frontier:
            current = frontier.pop()
            if current in subtree:
                continue
            subtree.add(current)
            frontier.extend(children.get(current, ()))
        return subtree

    def _role_names(self, role_ids) -> list[str]:
        with self.store.read() as txn:
            names = []
            for role_id in role_ids:
                row = txn.one('SELECT name FROM "role" WHERE id = ?', (role_id,))
                if row:
                    names.append(row["name"])
        return sorted(names)
