"""HTTP surface: one route per domain operation under the /uuis prefix.

Responses are JSON. Authentication rides on an HTTP-only session cookie;
the login endpoint is the only exempt operation. A global error handler
turns modeled failures into their mapped status codes and anything
unmodeled into a clean 500 carrying a correlation id, with the full detail
logged server-side only.
"""

from __future__ import annotations

import logging
import uuid
from pathlib import Path

from fastapi import Depends, FastAPI, Request as HttpRequest, Response, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException
from starlette.staticfiles import StaticFiles

from uuis import audit as audit_module
from uuis.api import serialize as ser
from uuis.bulkload import parse_csv
from uuis.errors import UuisError, ValidationError
from uuis.pagination import DEFAULT_PER_PAGE
from uuis.reports import CODE_TO_STATUS, ReportFilter, export_csv
from uuis.search import (
    NO_RESULTS_MESSAGE,
    AdvancedCriteria,
    Clause,
    Connective,
    SearchEntity,
    normalize_query,
)
from uuis.security import User
from uuis.system import UuisSystem
from uuis.timestamps import parse_filter_bound
from uuis.workflow import RequestStatus

logger = logging.getLogger("uuis.api")

SESSION_COOKIE = "uuis_session"


class _RequestUriMiddleware:
    """Expose the request path to the audit trail via a context variable."""

    def __init__(self, app):
        self.app = app

    async def __call__(self, scope, receive, send):
        if scope["type"] != "http":
            await self.app(scope, receive, send)
            return
        token = audit_module.current_request_uri.set(scope.get("path"))
        try:
            await self.app(scope, receive, send)
        finally:
            audit_module.current_request_uri.reset(token)


def _error_body(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "correlation_id": uuid.uuid4().hex},
    )


# ---------------------------------------------------------------- payloads


class LoginBody(BaseModel):
    username: str
    password: str


class PartBody(BaseModel):
    name: str | None = None
    parent_id: int | None = None
    type: str | None = None
    heads: list[int] | None = None
    version: int | None = None


class UserBody(BaseModel):
    username: str | None = None
    name: str | None = None
    password: str | None = None
    roles: list[int] | None = None
    direct_permissions: list[str] | None = None
    member_parts: list[int] | None = None
    version: int | None = None


class RoleBody(BaseModel):
    name: str | None = None
    permissions: list[str] | None = None
    version: int | None = None


class TypePropertyBody(BaseModel):
    name: str
    hint: str | None = None


class TypeBody(BaseModel):
    name: str
    description: str | None = None
    properties: list[TypePropertyBody] = []


class AssetCreateBody(BaseModel):
    name: str
    type_id: int
    location_id: int
    owner_id: int
    legacyid: str | None = None
    details: str | None = None
    serial_number: str | None = None
    status: str = "AVAILABLE"
    assignee_id: int | None = None
    parent_id: int | None = None
    property_values: dict[int, str] = {}


class AssetUpdateBody(BaseModel):
    name: str | None = None
    details: str | None = None
    serial_number: str | None = None
    status: str | None = None
    legacyid: str | None = None
    location_id: int | None = None
    owner_id: int | None = None
    assignee_id: int | None = None
    parent_id: int | None = None
    property_values: dict[int, str | None] | None = None
    version: int | None = None


class LocationCreateBody(BaseModel):
    name: str
    type_id: int
    owner_id: int
    parent_location_id: int | None = None
    description: str | None = None
    capacity: int = 0
    assignee_id: int | None = None
    property_values: dict[int, str] = {}


class LocationUpdateBody(BaseModel):
    name: str | None = None
    description: str | None = None
    capacity: int | None = None
    parent_location_id: int | None = None
    owner_id: int | None = None
    assignee_id: int | None = None
    property_values: dict[int, str | None] | None = None
    version: int | None = None


class RequestBody(BaseModel):
    title: str | None = None
    description: str | None = None
    comments: str | None = None
    request_type: str | None = None
    subject_id: int | None = None


class AssignBody(BaseModel):
    part_id: int


class ClauseBody(BaseModel):
    field: str
    value: str = ""
    connective: str = "AND"


class AdvancedSearchBody(BaseModel):
    entity: str
    clauses: list[ClauseBody]
    page: int = 1
    per_page: int = DEFAULT_PER_PAGE


# ---------------------------------------------------------------- factory


def create_app(system: UuisSystem, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="UUIS", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.system = system
    app.add_middleware(_RequestUriMiddleware)

    def sys() -> UuisSystem:
        return app.state.system

    def current_user(request: HttpRequest) -> User:
        return sys().security.resolve_session(request.cookies.get(SESSION_COOKIE))

    actor = Depends(current_user)

    # ---- error handling --------------------------------------------------

    @app.exception_handler(UuisError)
    async def _domain_error(request: HttpRequest, exc: UuisError):
        return _error_body(exc.http_status, exc.code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def _body_error(request: HttpRequest, exc: RequestValidationError):
        return _error_body(400, "validation", "malformed request body or parameters")

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request: HttpRequest, exc: StarletteHTTPException):
        code = "not_found" if exc.status_code == 404 else f"http_{exc.status_code}"
        return _error_body(exc.status_code, code, str(exc.detail))

    @app.exception_handler(Exception)
    async def _unhandled_error(request: HttpRequest, exc: Exception):
        correlation_id = uuid.uuid4().hex
        logger.exception("unhandled failure %s on %s", correlation_id, request.url.path)
        return JSONResponse(
            status_code=500,
            content={
                "code": "internal",
                "message": "something went wrong; the failure was logged",
                "correlation_id": correlation_id,
            },
        )

    # ---- auth ------------------------------------------------------------

    @app.post("/uuis/login")
    def login(body: LoginBody, response: Response):
        session = sys().security.authenticate(body.username, body.password)
        user = sys().security.get_user(session.user_id)
        response.set_cookie(
            SESSION_COOKIE, session.token, httponly=True, samesite="lax", max_age=8 * 3600
        )
        return {"user": ser.user_json(sys(), user, detailed=True)}

    @app.post("/uuis/logout")
    def logout(request: HttpRequest, response: Response):
        token = request.cookies.get(SESSION_COOKIE)
        if token:
            sys().security.logout(token)
        response.delete_cookie(SESSION_COOKIE)
        return {"ok": True}

    @app.get("/uuis/session")
    def session_info(user: User = actor):
        return {"user": ser.user_json(sys(), user, detailed=True)}

    # ---- university structure ---------------------------------------------

    @app.get("/uuis/universityPart/list")
    def part_list(user: User = actor):
        parts = sys().security.part_list()
        return {"rows": [ser.part_json(sys(), p) for p in parts], "total": len(parts)}

    @app.get("/uuis/universityPart/show/{part_id}")
    def part_show(part_id: int, user: User = actor):
        part = sys().security.get_part(part_id)
        return ser.part_json(sys(), part, heads=True)

    @app.post("/uuis/universityPart/save")
    def part_save(body: PartBody, user: User = actor):
        if body.name is None or body.type is None:
            raise ValidationError("name and type are required")
        part = sys().security.part_create(
            user, body.name, body.parent_id, body.type, body.heads or ()
        )
        return ser.part_json(sys(), part, heads=True)

    @app.post("/uuis/universityPart/update/{part_id}")
    def part_update(part_id: int, body: PartBody, user: User = actor):
        fields = body.model_dump(exclude_unset=True)
        kwargs = {}
        if "name" in fields:
            kwargs["name"] = body.name
        if "parent_id" in fields:
            kwargs["parent_id"] = body.parent_id
        if "type" in fields:
            kwargs["type"] = body.type
        if "heads" in fields:
            kwargs["heads"] = body.heads
        part = sys().security.part_update(user, part_id, version=body.version, **kwargs)
        return ser.part_json(sys(), part, heads=True)

    # ---- users -------------------------------------------------------------

    @app.get("/uuis/user/list")
    def user_list(page: int = 1, per_page: int = DEFAULT_PER_PAGE, user: User = actor):
        result = sys().security.user_list(user, page, per_page)
        return ser.page_json(result, lambda u: ser.user_json(sys(), u))

    @app.get("/uuis/user/show/{user_id}")
    def user_show(user_id: int, user: User = actor):
        shown = sys().security.user_show(user, user_id)
        return ser.user_json(sys(), shown, detailed=True)

    @app.post("/uuis/user/save")
    def user_save(body: UserBody, user: User = actor):
        if body.username is None or body.name is None or body.password is None:
            raise ValidationError("username, name and password are required")
        created = sys().security.user_create(
            user,
            body.username,
            body.name,
            body.password,
            roles=body.roles or (),
            direct_permissions=body.direct_permissions or (),
            member_parts=body.member_parts or (),
        )
        return ser.user_json(sys(), created, detailed=True)

    @app.post("/uuis/user/update/{user_id}")
    def user_update(user_id: int, body: UserBody, user: User = actor):
        fields = body.model_dump(exclude_unset=True)
        updated = sys().security.user_update(
            user,
            user_id,
            name=fields.get("name"),
            password=fields.get("password"),
            roles=fields.get("roles"),
            member_parts=fields.get("member_parts"),
            version=body.version,
        )
        return ser.user_json(sys(), updated, detailed=True)

    @app.post("/uuis/user/delete/{user_id}")
    def user_delete(user_id: int, user: User = actor):
        sys().security.user_delete(user, user_id)
        return {"ok": True}

    # ---- roles ---------------------------------------------------------------

    @app.get("/uuis/role/list")
    def role_list(page: int = 1, per_page: int = DEFAULT_PER_PAGE, user: User = actor):
        result = sys().security.role_list(user, page, per_page)
        return ser.page_json(result, ser.role_json)

    @app.get("/uuis/role/show/{role_id}")
    def role_show(role_id: int, user: User = actor):
        return ser.role_json(sys().security.role_show(user, role_id))

    @app.get("/uuis/role/users/{role_id}")
    def role_users(role_id: int, user: User = actor):
        users = sys().security.role_users(user, role_id)
        return {"rows": [ser.user_json(sys(), u) for u in users], "total": len(users)}

    @app.post("/uuis/role/save")
    def role_save(body: RoleBody, user: User = actor):
        if body.name is None:
            raise ValidationError("name is required")
        role = sys().security.role_create(user, body.name, body.permissions or ())
        return ser.role_json(role)

    @app.post("/uuis/role/update/{role_id}")
    def role_update(role_id: int, body: RoleBody, user: User = actor):
        fields = body.model_dump(exclude_unset=True)
        role = sys().security.role_update(
            user,
            role_id,
            name=fields.get("name"),
            permissions=fields.get("permissions"),
            version=body.version,
        )
        return ser.role_json(role)

    @app.post("/uuis/role/delete/{role_id}")
    def role_delete(role_id: int, user: User = actor):
        sys().security.role_delete(user, role_id)
        return {"ok": True}

    # ---- asset types -----------------------------------------------------------

    @app.get("/uuis/assetType/list")
    def asset_type_list(page: int = 1, per_page: int = DEFAULT_PER_PAGE, user: User = actor):
        result = sys().inventory.asset_type_list(user, page, per_page)
        return ser.page_json(result, ser.asset_type_json)

    @app.get("/uuis/assetType/show/{type_id}")
    def asset_type_show(type_id: int, user: User = actor):
        return ser.asset_type_json(sys().inventory.asset_type_show(user, type_id))

    @app.post("/uuis/assetType/save")
    def asset_type_save(body: TypeBody, user: User = actor):
        created = sys().inventory.asset_type_create(
            user,
            body.name,
            body.description,
            [(p.name, p.hint or "") for p in body.properties],
        )
        return ser.asset_type_json(created)

    # ---- location types ---------------------------------------------------------

    @app.get("/uuis/locationType/list")
    def location_type_list(page: int = 1, per_page: int = DEFAULT_PER_PAGE, user: User = actor):
        result = sys().inventory.location_type_list(user, page, per_page)
        return ser.page_json(result, ser.location_type_json)

    @app.post("/uuis/locationType/save")
    def location_type_save(body: TypeBody, user: User = actor):
        created = sys().inventory.location_type_create(
            user,
            body.name,
            body.description,
            [(p.name, p.hint) for p in body.properties],
        )
        return ser.location_type_json(created)

    # ---- assets --------------------------------------------------------------------

    @app.get("/uuis/asset/list")
    def asset_list(
        location_id: int | None = None,
        page: int = 1,
        per_page: int = DEFAULT_PER_PAGE,
        user: User = actor,
    ):
        result = sys().inventory.asset_list(user, location_id, page, per_page)
        return ser.page_json(result, lambda a: ser.asset_json(sys(), a))

    @app.get("/uuis/asset/show/{asset_id}")
    def asset_show(asset_id: int, user: User = actor):
        return ser.asset_json(sys(), sys().inventory.asset_show(user, asset_id))

    @app.post("/uuis/asset/save")
    def asset_save(body: AssetCreateBody, user: User = actor):
        created = sys().inventory.asset_create(
            user,
            name=body.name,
            type_id=body.type_id,
            location_id=body.location_id,
            owner_id=body.owner_id,
            legacyid=body.legacyid,
            details=body.details,
            serial_number=body.serial_number,
            status=body.status,
            assignee_id=body.assignee_id,
            parent_id=body.parent_id,
            property_values=body.property_values,
        )
        return ser.asset_json(sys(), created)

    @app.post("/uuis/asset/update/{asset_id}")
    def asset_update(asset_id: int, body: AssetUpdateBody, user: User = actor):
        changes = body.model_dump(exclude_unset=True)
        version = changes.pop("version", None)
        updated = sys().inventory.asset_edit(user, asset_id, changes, version=version)
        return ser.asset_json(sys(), updated)

    # ---- locations ---------------------------------------------------------------

    @app.get("/uuis/location/list")
    def location_list(
        parent_location_id: int | None = None,
        page: int = 1,
        per_page: int = DEFAULT_PER_PAGE,
        user: User = actor,
    ):
        result = sys().inventory.location_list(user, parent_location_id, page, per_page)
        return ser.page_json(result, lambda l: ser.location_json(sys(), l))

    @app.get("/uuis/location/show/{location_id}")
    def location_show(location_id: int, user: User = actor):
        return ser.location_json(sys(), sys().inventory.location_show(user, location_id))

    @app.post("/uuis/location/save")
    def location_save(body: LocationCreateBody, user: User = actor):
        created = sys().inventory.location_create(
            user,
            name=body.name,
            type_id=body.type_id,
            owner_id=body.owner_id,
            parent_location_id=body.parent_location_id,
            description=body.description,
            capacity=body.capacity,
            assignee_id=body.assignee_id,
            property_values=body.property_values,
        )
        return ser.location_json(sys(), created)

    @app.post("/uuis/location/update/{location_id}")
    def location_update(location_id: int, body: LocationUpdateBody, user: User = actor):
        changes = body.model_dump(exclude_unset=True)
        version = changes.pop("version", None)
        updated = sys().inventory.location_edit(user, location_id, changes, version=version)
        return ser.location_json(sys(), updated)

    @app.post("/uuis/location/delete/{location_id}")
    def location_delete(location_id: int, user: User = actor):
        sys().inventory.location_delete(user, location_id)
        return {"ok": True}

    # ---- requests -----------------------------------------------------------------

    @app.get("/uuis/request/list")
    def request_list(user: User = actor):
        buckets = sys().workflow.request_list(user)
        return ser.buckets_json(sys(), buckets)

    @app.get("/uuis/request/show/{request_id}")
    def request_show(request_id: int, user: User = actor):
        detail = sys().workflow.request_show(user, request_id)
        return ser.request_json(sys(), detail.request, detail.subject_iufaid)

    @app.post("/uuis/request/save")
    def request_save(body: RequestBody, user: User = actor):
        created = sys().workflow.request_create(
            user,
            title=body.title,
            comments=body.comments,
            description=body.description,
            request_type=body.request_type,
            subject_id=body.subject_id,
        )
        return ser.request_json(sys(), created)

    @app.post("/uuis/request/approve/{request_id}")
    def request_approve(request_id: int, user: User = actor):
        return ser.request_json(sys(), sys().workflow.approve(user, request_id))

    @app.post("/uuis/request/reject/{request_id}")
    def request_reject(request_id: int, user: User = actor):
        return ser.request_json(sys(), sys().workflow.reject(user, request_id))

    @app.post("/uuis/request/execute/{request_id}")
    def request_execute(request_id: int, user: User = actor):
        return ser.request_json(sys(), sys().workflow.execute(user, request_id))

    @app.post("/uuis/request/notExecute/{request_id}")
    def request_not_execute(request_id: int, user: User = actor):
        return ser.request_json(sys(), sys().workflow.not_execute(user, request_id))

    @app.post("/uuis/request/assign/{request_id}")
    def request_assign(request_id: int, body: AssignBody, user: User = actor):
        return ser.request_json(sys(), sys().workflow.assign(user, request_id, body.part_id))

    # ---- bulk load -----------------------------------------------------------------

    @app.post("/uuis/bulkLoad/insert")
    async def bulk_insert(file: UploadFile, user: User = actor):
        parsed = parse_csv(await file.read())
        outcomes = sys().bulkload.bulk_insert(user, parsed)
        return {"outcomes": [ser.outcome_json(o) for o in outcomes]}

    @app.post("/uuis/bulkLoad/update")
    async def bulk_update(file: UploadFile, user: User = actor):
        parsed = parse_csv(await file.read())
        outcomes = sys().bulkload.bulk_update(user, parsed)
        return {"outcomes": [ser.outcome_json(o) for o in outcomes]}

    # ---- search --------------------------------------------------------------------

    @app.get("/uuis/search/basic")
    def search_basic(
        q: str = "", page: int = 1, per_page: int = DEFAULT_PER_PAGE, user: User = actor
    ):
        result = sys().search.basic_search(user, normalize_query(q), page, per_page)
        payload = ser.page_json(result, ser.hit_json)
        if result.total == 0:
            payload["message"] = NO_RESULTS_MESSAGE
        return payload

    @app.post("/uuis/search/advanced")
    def search_advanced(body: AdvancedSearchBody, user: User = actor):
        try:
            entity = SearchEntity(body.entity.upper())
        except ValueError:
            raise ValidationError(f"unknown search entity {body.entity!r}") from None
        try:
            clauses = tuple(
                Clause(field=c.field, value=c.value, connective=Connective(c.connective.upper()))
                for c in body.clauses
            )
        except ValueError:
            raise ValidationError("connective must be AND or OR") from None
        criteria = AdvancedCriteria(entity=entity, clauses=clauses)
        result = sys().search.advanced_search(user, criteria, body.page, body.per_page)
        payload = ser.page_json(result, ser.hit_json)
        if result.total == 0:
            payload["message"] = NO_RESULTS_MESSAGE
        return payload

    # ---- reports -------------------------------------------------------------------

    def _report_filter(
        building_id=None,
        room_type_id=None,
        department_id=None,
        status=None,
        date_from=None,
        date_to=None,
        page=1,
        per_page=DEFAULT_PER_PAGE,
    ) -> ReportFilter:
        parsed_status = None
        if status:
            upper = status.upper()
            if upper in CODE_TO_STATUS:
                parsed_status = CODE_TO_STATUS[upper]
            else:
                try:
                    parsed_status = RequestStatus(upper)
                except ValueError:
                    raise ValidationError(f"unknown status {status!r}") from None
        return ReportFilter(
            building_id=building_id,
            room_type_id=room_type_id,
            department_id=department_id,
            status=parsed_status,
            date_from=parse_filter_bound(date_from) if date_from else None,
            date_to=parse_filter_bound(date_to, end=True) if date_to else None,
            page=page,
            per_page=per_page,
        )

    def _csv_response(report) -> Response:
        return Response(
            content=export_csv(report),
            media_type="text/csv",
            headers={"Content-Disposition": "attachment; filename=report.csv"},
        )

    @app.get("/uuis/report/assetsByLocation")
    def report_assets_by_location(
        building_id: int | None = None,
        room_type_id: int | None = None,
        page: int = 1,
        per_page: int = DEFAULT_PER_PAGE,
        user: User = actor,
    ):
        filt = _report_filter(
            building_id=building_id, room_type_id=room_type_id, page=page, per_page=per_page
        )
        return ser.report_json(sys().reports.assets_by_location(user, filt))

    @app.get("/uuis/report/assetsByLocation/export")
    def report_assets_by_location_export(
        building_id: int | None = None,
        room_type_id: int | None = None,
        user: User = actor,
    ):
        filt = _report_filter(building_id=building_id, room_type_id=room_type_id)
        return _csv_response(sys().reports.assets_by_location(user, filt, paginated=False))

    @app.get("/uuis/report/requests")
    def report_requests(
        department_id: int | None = None,
        status: str | None = None,
        date_from: str | None = None,
        date_to: str | None = None,
        page: int = 1,
        per_page: int = DEFAULT_PER_PAGE,
        user: User = actor,
    ):
        filt = _report_filter(
            department_id=department_id,
            status=status,
            date_from=date_from,
            date_to=date_to,
            page=page,
            per_page=per_page,
        )
        return ser.report_json(sys().reports.requests(user, filt))

    @app.get("/uuis/report/requests/export")
    def report_requests_export(
        department_id: int | None = None,
        status: str | None = None,
        date_from: str | None = None,
        date_to: str | None = None,
        user: User = actor,
    ):
        filt = _report_filter(
            department_id=department_id, status=status, date_from=date_from, date_to=date_to
        )
        return _csv_response(sys().reports.requests(user, filt, paginated=False))

    @app.get("/uuis/report/userPermissions")
    def report_user_permissions(
        department_id: int | None = None,
        page: int = 1,
        per_page: int = DEFAULT_PER_PAGE,
        user: User = actor,
    ):
        filt = _report_filter(department_id=department_id, page=page, per_page=per_page)
        return ser.report_json(sys().reports.user_permissions(user, filt))

    @app.get("/uuis/report/userPermissions/export")
    def report_user_permissions_export(department_id: int | None = None, user: User = actor):
        filt = _report_filter(department_id=department_id)
        return _csv_response(sys().reports.user_permissions(user, filt, paginated=False))

    # ---- audit ---------------------------------------------------------------------

    @app.get("/uuis/auditLog/list")
    def audit_list(
        page: int = 1,
        per_page: int = 10,
        sort: str = "lastUpdated",
        order: str = "desc",
        user: User = actor,
    ):
        result = sys().audit.audit_list(sys().security, user, page, per_page, sort, order)
        return ser.page_json(result, ser.audit_json)

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
