"""Request lifecycle: create, list buckets, and drive status transitions.

The status machine is fixed: a new request waits for approval; approval
moves it to waiting-for-execution; rejection, execution, and non-execution
are terminal. Transitions are compare-and-set on the stored status, so two
racing approvals resolve to one success and one illegal-transition error.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from uuis.audit import AuditEvent, AuditService
from uuis.errors import (
    AuthorizationError,
    NotFoundError,
    TransitionError,
    ValidationError,
)
from uuis.inventory import InventoryService
from uuis.security import SecurityService, User
from uuis.storage import Store
from uuis.timestamps import format_ts, now_utc
from uuis.validation import optional_text, parse_enum, require_text


class RequestStatus(str, Enum):
    WAITING_APPROVAL = "WAITING_APPROVAL"
    WAITING_EXECUTION = "WAITING_EXECUTION"
    EXECUTED = "EXECUTED"
    REJECTED = "REJECTED"
    NOT_EXECUTED = "NOT_EXECUTED"


class RequestType(str, Enum):
    TRANSFER = "TRANSFER"
    REPAIR = "REPAIR"
    ACQUISITION = "ACQUISITION"
    OTHER = "OTHER"


ALLOWED_TRANSITIONS: dict[RequestStatus, frozenset[RequestStatus]] = {
    RequestStatus.WAITING_APPROVAL: frozenset(
        {RequestStatus.WAITING_EXECUTION, RequestStatus.REJECTED}
    ),
    RequestStatus.WAITING_EXECUTION: frozenset(
        {RequestStatus.EXECUTED, RequestStatus.NOT_EXECUTED}
    ),
    RequestStatus.EXECUTED: frozenset(),
    RequestStatus.REJECTED: frozenset(),
    RequestStatus.NOT_EXECUTED: frozenset(),
}

TERMINAL_STATUSES = frozenset(
    {RequestStatus.EXECUTED, RequestStatus.REJECTED, RequestStatus.NOT_EXECUTED}
)

# Permission needed to move a request into each target status.
_TRANSITION_PERMISSION = {
    RequestStatus.WAITING_EXECUTION: "request.approve",
    RequestStatus.REJECTED: "request.approve",
    RequestStatus.EXECUTED: "request.execute",
    RequestStatus.NOT_EXECUTED: "request.execute",
}


@dataclass(frozen=True)
class Request:
    id: int
    version: int
    title: str
    description: str | None
    comments: str | None
    request_type: RequestType
    status: RequestStatus
    requester_id: int
    part_assigned_id: int
    user_assigned_id: int | None
    subject_id: int | None
    submission_date: str


@dataclass(frozen=True)
class RequestBuckets:
    waiting_approval: tuple[Request, ...]
    waiting_execution: tuple[Request, ...]
    mine: tuple[Request, ...]


@dataclass(frozen=True)
class RequestDetail:
    request: Request
    subject_iufaid: str | None


class WorkflowService:
    def __init__(
        self,
        store: Store,
        security: SecurityService,
        inventory: InventoryService,
        audit: AuditService,
    ):
        self.store = store
        self.security = security
        self.inventory = inventory
        self.audit = audit

    def request_create(
        self,
        actor: User,
        *,
        title: str | None = None,
        comments: str | None = None,
        description: str | None = None,
        request_type: RequestType | str | None = None,
        subject_id: int | None = None,
    ) -> Request:
        """File a request. Any authenticated user may do this.

        The basic form supplies only free text: it stores type OTHER and no
        subject. The advanced form names a type and a subject asset; the
        request is then routed to the subject's owning part, otherwise to
        the requester's member part.
        """
        comments = optional_text(comments, "comments")
        description = optional_text(description, "description")
        if title is None:
            title = comments or description
        title = require_text(title, "title")
        rtype = (
            parse_enum(RequestType, request_type, "request_type")
            if request_type is not None
            else RequestType.OTHER
        )
        with self.store.transaction() as txn:
            subject_owner = None
            if subject_id is not None:
                subject = txn.one("SELECT id, owner_id FROM asset WHERE id = ?", (subject_id,))
                if subject is None:
                    raise ValidationError(f"unknown subject asset {subject_id}")
                subject_owner = subject["owner_id"]
            part_assigned = subject_owner if subject_owner is not None else self._home_part(txn, actor)
            submitted = format_ts(now_utc())
            request_id = txn.insert(
                "request",
                version=0,
                requester_id=actor.id,
                status=RequestStatus.WAITING_APPROVAL.value,
                part_assigned_id=part_assigned,
                subject_id=subject_id,
                request_type=rtype.value,
                submission_date=submitted,
                title=title,
                user_assigned_id=None,
                description=description,
                comments=comments,
            )
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.INSERT,
                class_name="Request",
                object_id=request_id,
                object_version=0,
            )
            return self._request(txn.one("SELECT * FROM request WHERE id = ?", (request_id,)))

    def request_list(self, actor: User) -> RequestBuckets:
        """The three dashboard buckets.

        Approval and execution buckets hold requests assigned inside the
        actor's scope; the third holds the actor's own requests regardless
        of status.
        """
        scope = self.security.resolve_scope(actor)
        with self.store.read() as txn:
            rows = txn.query("SELECT * FROM request ORDER BY id")
        requests = [self._request(r) for r in rows]
        return RequestBuckets(
            waiting_approval=tuple(
                r
                for r in requests
                if r.status is RequestStatus.WAITING_APPROVAL and r.part_assigned_id in scope
            ),
            waiting_execution=tuple(
                r
                for r in requests
                if r.status is RequestStatus.WAITING_EXECUTION and r.part_assigned_id in scope
            ),
            mine=tuple(r for r in requests if r.requester_id == actor.id),
        )

    def request_show(self, actor: User, request_id: int) -> RequestDetail:
        with self.store.read() as txn:
            row = txn.one("SELECT * FROM request WHERE id = ?", (request_id,))
            if row is None:
                raise NotFoundError(f"no request {request_id}")
            request = self._request(row)
            subject_iufaid = None
            if request.subject_id is not None:
                subject = txn.one("SELECT iufaid FROM asset WHERE id = ?", (request.subject_id,))
                subject_iufaid = subject["iufaid"] if subject else None
        if request.requester_id != actor.id:
            if request.part_assigned_id not in self.security.resolve_scope(actor):
                if self.security.compute_level(actor) < 3:
                    raise AuthorizationError("request is outside your scope")
        return RequestDetail(request=request, subject_iufaid=subject_iufaid)

    def transition(self, actor: User, request_id: int, target: RequestStatus | str) -> Request:
        """Attempt to move a request to ``target``; the machine decides."""
        target = parse_enum(RequestStatus, target, "target status")
        with self.store.transaction() as txn:
            row = txn.one("SELECT * FROM request WHERE id = ?", (request_id,))
            if row is None:
                raise NotFoundError(f"no request {request_id}")
            current = RequestStatus(row["status"])
            if target not in ALLOWED_TRANSITIONS[current]:
                raise TransitionError(f"cannot move a {current.value} request to {target.value}")
            self.security.require_permission(
                actor, _TRANSITION_PERMISSION[target], row["part_assigned_id"]
            )
            cur = txn.execute(
                "UPDATE request SET status = ?, version = version + 1"
                " WHERE id = ? AND status = ?",
                (target.value, request_id, current.value),
            )
            if cur.rowcount != 1:
                raise TransitionError(f"request {request_id} changed status concurrently")
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.UPDATE,
                class_name="Request",
                object_id=request_id,
                object_version=row["version"] + 1,
                diffs=[("status", current.value, target.value)],
            )
            return self._request(txn.one("SELECT * FROM request WHERE id = ?", (request_id,)))

    def approve(self, actor: User, request_id: int) -> Request:
        return self.transition(actor, request_id, RequestStatus.WAITING_EXECUTION)

    def reject(self, actor: User, request_id: int) -> Request:
        return self.transition(actor, request_id, RequestStatus.REJECTED)

    def execute(self, actor: User, request_id: int) -> Request:
        # Executing never touches the subject asset; the pickup is recorded
        # through an explicit asset edit.
        return self.transition(actor, request_id, RequestStatus.EXECUTED)

    def not_execute(self, actor: User, request_id: int) -> Request:
        return self.transition(actor, request_id, RequestStatus.NOT_EXECUTED)

    def assign(self, actor: User, request_id: int, new_part_id: int) -> Request:
        """Reroute a live request to another university part."""
        with self.store.transaction() as txn:
            row = txn.one("SELECT * FROM request WHERE id = ?", (request_id,))
            if row is None:
                raise NotFoundError(f"no request {request_id}")
            current = RequestStatus(row["status"])
            if current in TERMINAL_STATUSES:
                raise TransitionError(f"cannot reassign a {current.value} request")
            self.security.require_permission(actor, "request.approve", row["part_assigned_id"])
            part = txn.one("SELECT id, name FROM university_part WHERE id = ?", (new_part_id,))
            if part is None:
                raise ValidationError(f"unknown university part {new_part_id}")
            if new_part_id == row["part_assigned_id"]:
                return self._request(row)
            old_name_row = txn.one(
                "SELECT name FROM university_part WHERE id = ?", (row["part_assigned_id"],)
            )
            txn.execute(
                "UPDATE request SET part_assigned_id = ?, version = version + 1 WHERE id = ?",
                (new_part_id, request_id),
            )
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.UPDATE,
                class_name="Request",
                object_id=request_id,
                object_version=row["version"] + 1,
                diffs=[("partAssigned", old_name_row["name"], part["name"])],
            )
            return self._request(txn.one("SELECT * FROM request WHERE id = ?", (request_id,)))

    def get_request(self, request_id: int) -> Request:
        with self.store.read() as txn:
            row = txn.one("SELECT * FROM request WHERE id = ?", (request_id,))
        if row is None:
            raise NotFoundError(f"no request {request_id}")
        return self._request(row)

    # -- internals ---------------------------------------------------------

    def _home_part(self, txn, actor: User) -> int:
        """Routing for subject-less requests: the requester's member part,
        falling back to the tree root."""
        member = txn.one(
            "SELECT university_part_id AS id FROM user_staff_membership_parts"
            " WHERE user_id = ? ORDER BY university_part_id LIMIT 1",
            (actor.id,),
        )
        if member:
            return member["id"]
        root = txn.one("SELECT id FROM university_part WHERE parent_id IS NULL ORDER BY id LIMIT 1")
        if root is None:
            raise ValidationError("no university structure exists to route the request to")
        return root["id"]

    @staticmethod
    def _request(row) -> Request:
        return Request(
            id=row["id"],
            version=row["version"],
            title=row["title"],
            description=row["description"],
            comments=row["comments"],
            request_type=RequestType(row["request_type"]),
            status=RequestStatus(row["status"]),
            requester_id=row["requester_id"],
            part_assigned_id=row["part_assigned_id"],
            user_assigned_id=row["user_assigned_id"],
            subject_id=row["subject_id"],
            submission_date=row["submission_date"],
        )
