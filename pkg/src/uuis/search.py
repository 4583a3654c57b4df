"""Keyword search and field-scoped advanced search.

Queries are truncated at 1023 characters. A whitespace-only query matches
everything visible to the caller; an empty query matches nothing. Matching
is a case-insensitive substring test over each entity's searchable text
attributes, evaluated over one storage snapshot so pagination totals never
drift from the rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from uuis.errors import AuthorizationError, ValidationError
from uuis.pagination import Page, paginate
from uuis.security import SecurityService, User
from uuis.storage import Store

MAX_QUERY_LENGTH = 1023

NO_RESULTS_MESSAGE = "No results match your criteria"


class SearchEntity(str, Enum):
    ASSET = "ASSET"
    LOCATION = "LOCATION"
    REQUEST = "REQUEST"
    USER = "USER"


_ENTITY_ORDER = {
    SearchEntity.ASSET: 0,
    SearchEntity.LOCATION: 1,
    SearchEntity.REQUEST: 2,
    SearchEntity.USER: 3,
}

# Directly searchable text attributes per entity. Asset and location
# property values are scanned by the basic search as well.
SEARCHABLE_FIELDS: dict[SearchEntity, tuple[str, ...]] = {
    SearchEntity.ASSET: ("iufaid", "legacyid", "name", "details", "serial_number", "status"),
    SearchEntity.LOCATION: ("name", "description"),
    SearchEntity.REQUEST: ("title", "description", "comments", "status", "request_type"),
    SearchEntity.USER: ("username", "name"),
}


class Connective(str, Enum):
    AND = "AND"
    OR = "OR"


@dataclass(frozen=True)
class SearchQuery:
    raw_text: str
    normalized: str
    match_all: bool

    @property
    def is_empty(self) -> bool:
        return self.raw_text == ""


@dataclass(frozen=True)
class Clause:
    field: str
    value: str
    connective: Connective = Connective.AND


@dataclass(frozen=True)
class AdvancedCriteria:
    entity: SearchEntity
    clauses: tuple[Clause, ...]


@dataclass(frozen=True)
class SearchHit:
    entity: SearchEntity
    id: int
    title: str
    snippet: str | None


def normalize_query(raw: str) -> SearchQuery:
    normalized = raw[:MAX_QUERY_LENGTH]
    match_all = raw != "" and raw.strip() == ""
    return SearchQuery(raw_text=raw, normalized=normalized, match_all=match_all)


class SearchService:
    def __init__(self, store: Store, security: SecurityService):
        self.store = store
        self.security = security

    def basic_search(
        self,
        actor: User,
        query: SearchQuery | str,
        page: int = 1,
        per_page: int = 20,
    ) -> Page:
        if isinstance(query, str):
            query = normalize_query(query)
        if query.is_empty:
            return paginate([], page, per_page)
        rows = self._visible_rows(actor)
        if query.match_all:
            hits = [hit for hit, _texts in rows]
        else:
            needle = query.normalized.lower()
            hits = [hit for hit, texts in rows if any(needle in t.lower() for t in texts)]
        return paginate(hits, page, per_page)

    def advanced_search(
        self,
        actor: User,
        criteria: AdvancedCriteria,
        page: int = 1,
        per_page: int = 20,
    ) -> Page:
        """Left-to-right clause evaluation, no precedence between AND/OR."""
        if not self.security.has_permission(actor, "search.advanced"):
            raise AuthorizationError("search.advanced permission required")
        if not 1 <= len(criteria.clauses) <= 4:
            raise ValidationError("advanced search takes 1 to 4 clauses")
        fields = SEARCHABLE_FIELDS[criteria.entity]
        for clause in criteria.clauses:
            if clause.field not in fields:
                raise ValidationError(
                    f"unknown {criteria.entity.value.lower()} field {clause.field!r}"
                )
        rows = [
            (hit, fields_map)
            for hit, fields_map in self._visible_field_rows(actor, criteria.entity)
        ]
        matched: set[int] = self._clause_matches(rows, criteria.clauses[0])
        for clause in criteria.clauses[1:]:
            ids = self._clause_matches(rows, clause)
            if clause.connective is Connective.OR:
                matched |= ids
            else:
                matched &= ids
        hits = [hit for hit, _ in rows if hit.id in matched]
        hits.sort(key=lambda h: h.id)
        return paginate(hits, page, per_page)

    # -- row collection -----------------------------------------------------

    @staticmethod
    def _clause_matches(rows: Sequence[tuple[SearchHit, dict[str, str]]], clause: Clause) -> set[int]:
        needle = clause.value[:MAX_QUERY_LENGTH].lower()
        return {
            hit.id
            for hit, fields_map in rows
            if needle in fields_map.get(clause.field, "").lower()
        }

    def _visible_rows(self, actor: User) -> list[tuple[SearchHit, list[str]]]:
        """Every entity instance the actor may see, with its searchable text."""
        collected: list[tuple[SearchHit, list[str]]] = []
        for entity in SearchEntity:
            for hit, fields_map in self._visible_field_rows(actor, entity):
                collected.append((hit, [v for v in fields_map.values() if v]))
        collected.sort(key=lambda pair: (_ENTITY_ORDER[pair[0].entity], pair[0].id))
        return collected

    def _visible_field_rows(
        self, actor: User, entity: SearchEntity
    ) -> list[tuple[SearchHit, dict[str, str]]]:
        scope = self.security.resolve_scope(actor)
        level = self.security.compute_level(actor)
        out: list[tuple[SearchHit, dict[str, str]]] = []
        with self.store.read() as txn:
            if entity is SearchEntity.ASSET:
                prop_values: dict[int, list[str]] = {}
                for prop in txn.query("SELECT asset_id, value FROM asset_property"):
                    prop_values.setdefault(prop["asset_id"], []).append(prop["value"])
                for row in txn.query("SELECT * FROM asset ORDER BY id"):
                    if row["owner_id"] not in scope:
                        continue
                    fields_map = {f: row[f] or "" for f in SEARCHABLE_FIELDS[entity]}
                    for i, extra in enumerate(prop_values.get(row["id"], ())):
                        fields_map[f"__prop{i}"] = extra
                    out.append(
                        (
                            SearchHit(
                                entity=entity,
                                id=row["id"],
                                title=row["name"],
                                snippet=row["iufaid"],
                            ),
                            fields_map,
                        )
                    )
            elif entity is SearchEntity.LOCATION:
                prop_values = {}
                for prop in txn.query("SELECT location_id, value FROM location_property"):
                    prop_values.setdefault(prop["location_id"], []).append(prop["value"])
                for row in txn.query("SELECT * FROM location ORDER BY id"):
                    if row["owner_id"] not in scope:
                        continue
                    fields_map = {f: row[f] or "" for f in SEARCHABLE_FIELDS[entity]}
                    for i, extra in enumerate(prop_values.get(row["id"], ())):
                        fields_map[f"__prop{i}"] = extra
                    out.append(
                        (
                            SearchHit(
                                entity=entity,
                                id=row["id"],
                                title=row["name"],
                                snippet=row["description"],
                            ),
                            fields_map,
                        )
                    )
            elif entity is SearchEntity.REQUEST:
                for row in txn.query("SELECT * FROM request ORDER BY id"):
                    if row["part_assigned_id"] not in scope and row["requester_id"] != actor.id:
                        continue
                    fields_map = {f: row[f] or "" for f in SEARCHABLE_FIELDS[entity]}
                    out.append(
                        (
                            SearchHit(
                                entity=entity,
                                id=row["id"],
                                title=row["title"],
                                snippet=row["status"],
                            ),
                            fields_map,
                        )
                    )
            else:
                memberships: dict[int, set[int]] = {}
                for m in txn.query(
                    "SELECT user_id, university_part_id FROM user_staff_membership_parts"
                ):
                    memberships.setdefault(m["user_id"], set()).add(m["university_part_id"])
                for m in txn.query("SELECT user_id, university_part_id FROM user_managed_parts"):
                    memberships.setdefault(m["user_id"], set()).add(m["university_part_id"])
                for row in txn.query('SELECT * FROM "user" ORDER BY id'):
                    visible = (
                        level == 3
                        or row["id"] == actor.id
                        or bool(memberships.get(row["id"], set()) & scope)
                    )
                    if not visible:
                        continue
                    fields_map = {f: row[f] or "" for f in SEARCHABLE_FIELDS[entity]}
                    out.append(
                        (
                            SearchHit(
                                entity=entity,
                                id=row["id"],
                                title=row["username"],
                                snippet=row["name"],
                            ),
                            fields_map,
                        )
                    )
        return out
