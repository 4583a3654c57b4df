"""Users, roles, permissions, the university hierarchy, and sessions.

Administrative power is derived, not stored: a user's level (0 to 3) comes
from the highest-typed university part they head, and their scope is the
set of parts reachable downward from those headships. Level-0 users hold
no administrative scope at all; heads of GROUP or UNIVERSITY parts (level
3) pass scope checks everywhere.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timedelta
from enum import Enum
from typing import Callable, Iterable

from uuis.audit import AuditEvent, AuditService
from uuis.errors import (
    AuthenticationError,
    AuthorizationError,
    DuplicateError,
    InUseError,
    NotFoundError,
    StaleVersionError,
    ValidationError,
)
from uuis.pagination import Page, paginate
from uuis.storage import Store, Transaction
from uuis.timestamps import now_utc
from uuis.validation import parse_enum, require_text

# One permission string per guarded operation surface.
PERMISSIONS = frozenset(
    {
        "request.create",
        "request.approve",
        "request.execute",
        "asset.view",
        "asset.edit",
        "asset.create",
        "location.edit",
        "location.create",
        "location.delete",
        "user.admin",
        "report.view",
        "audit.view",
        "search.advanced",
    }
)

SESSION_IDLE_LIMIT = timedelta(hours=8)

PBKDF2_ITERATIONS = 120_000


class PartType(str, Enum):
    GROUP = "GROUP"
    UNIVERSITY = "UNIVERSITY"
    FACULTY = "FACULTY"
    DEPARTMENT = "DEPARTMENT"


# GROUP sits above UNIVERSITY in the tree and confers the same top level.
LEVEL_BY_PART_TYPE = {
    PartType.DEPARTMENT: 1,
    PartType.FACULTY: 2,
    PartType.UNIVERSITY: 3,
    PartType.GROUP: 3,
}


@dataclass(frozen=True)
class UniversityPart:
    id: int
    version: int
    name: str
    parent_id: int | None
    type: PartType


@dataclass(frozen=True)
class User:
    id: int
    version: int
    username: str
    name: str


@dataclass(frozen=True)
class Role:
    id: int
    version: int
    name: str
    permissions: frozenset[str]


@dataclass(frozen=True)
class UserGrants:
    user_id: int
    roles: frozenset[int]
    direct_permissions: frozenset[str]
    managed_parts: frozenset[int]
    member_parts: frozenset[int]


@dataclass(frozen=True)
class Session:
    token: str
    user_id: int
    created_at: datetime


def hash_password(password: str, *, iterations: int = PBKDF2_ITERATIONS) -> str:
    """Salted one-way hash, encoded to fit a 255-character column."""
    salt = secrets.token_bytes(16)
    digest = hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, iterations)
    return f"pbkdf2_sha256${iterations}${salt.hex()}${digest.hex()}"


def verify_password(password: str, encoded: str) -> bool:
    try:
        algo, iterations, salt_hex, digest_hex = encoded.split("$")
        if algo != "pbkdf2_sha256":
            return False
        digest = hashlib.pbkdf2_hmac(
            "sha256", password.encode("utf-8"), bytes.fromhex(salt_hex), int(iterations)
        )
        return hmac.compare_digest(digest.hex(), digest_hex)
    except (ValueError, TypeError):
        return False


class SecurityService:
    def __init__(self, store: Store, audit: AuditService, clock: Callable[[], datetime] = now_utc):
        self.store = store
        self.audit = audit
        self.clock = clock
        self._sessions: dict[str, dict] = {}
        self._session_lock = threading.Lock()

    # -- sessions ---------------------------------------------------------

    def authenticate(self, username: str, password: str) -> Session:
        """Exchange credentials for a fresh session.

        Unknown usernames and wrong passwords produce the same error, and a
        failed attempt leaves no state behind, however often it repeats.
        """
        with self.store.read() as txn:
            row = txn.one('SELECT * FROM "user" WHERE username = ?', (username,))
        if row is None or not verify_password(password, row["password_hash"]):
            raise AuthenticationError("invalid credentials")
        token = secrets.token_hex(32)
        now = self.clock()
        with self._session_lock:
            self._sessions[token] = {"user_id": row["id"], "created_at": now, "last_used": now}
        return Session(token=token, user_id=row["id"], created_at=now)

    def logout(self, token: str) -> None:
        """Invalidate a session token. Unknown tokens are a no-op."""
        with self._session_lock:
            self._sessions.pop(token, None)

    def resolve_session(self, token: str | None) -> User:
        if not token:
            raise AuthenticationError("not authenticated")
        now = self.clock()
        with self._session_lock:
            state = self._sessions.get(token)
            if state is not None and now - state["last_used"] > SESSION_IDLE_LIMIT:
                del self._sessions[token]
                state = None
            if state is None:
                raise AuthenticationError("not authenticated")
            state["last_used"] = now
            user_id = state["user_id"]
        return self.get_user(user_id)

    # -- levels, scope, permissions ---------------------------------------

    def compute_level(self, user: User | int) -> int:
        user_id = user.id if isinstance(user, User) else user
        with self.store.read() as txn:
            rows = txn.query(
                "SELECT p.type FROM user_managed_parts m"
                " JOIN university_part p ON p.id = m.university_part_id"
                " WHERE m.user_id = ?",
                (user_id,),
            )
        levels = [LEVEL_BY_PART_TYPE[PartType(r["type"])] for r in rows]
        return max(levels, default=0)

    def resolve_scope(self, user: User | int) -> frozenset[int]:
        """Every part the user heads, plus all parts below those."""
        user_id = user.id if isinstance(user, User) else user
        with self.store.read() as txn:
            headed = [
                r["university_part_id"]
                for r in txn.query(
                    "SELECT university_part_id FROM user_managed_parts WHERE user_id = ?",
                    (user_id,),
                )
            ]
            children = self._child_index(txn)
        scope: set[int] = set()
        frontier = list(headed)
        while frontier:
            part_id = frontier.pop()
            if part_id in scope:
                continue
            scope.add(part_id)
            frontier.extend(children.get(part_id, ()))
        return frozenset(scope)

    def effective_permissions(self, user: User | int) -> frozenset[str]:
        user_id = user.id if isinstance(user, User) else user
        with self.store.read() as txn:
            direct = txn.query(
                "SELECT permissions_string FROM user_permissions WHERE user_id = ?", (user_id,)
            )
            via_roles = txn.query(
                "SELECT rp.permissions_string FROM user_roles ur"
                " JOIN role_permissions rp ON rp.role_id = ur.role_id"
                " WHERE ur.user_id = ?",
                (user_id,),
            )
        return frozenset(r["permissions_string"] for r in direct + via_roles)

    def has_permission(self, user: User | int, action: str) -> bool:
        return action in self.effective_permissions(user)

    def check_permission(self, user: User | int, action: str, target_part: int) -> bool:
        """Permission plus scope: held action and target inside the user's
        scope, with level-3 users passing the scope test everywhere."""
        if action not in self.effective_permissions(user):
            return False
        if self.compute_level(user) == 3:
            return True
        return target_part in self.resolve_scope(user)

    def require_permission(self, user: User, action: str, target_part: int) -> None:
        if not self.check_permission(user, action, target_part):
            raise AuthorizationError(f"{user.username} may not {action} for part {target_part}")

    def require_level(self, user: User, level: int) -> None:
        if self.compute_level(user) < level:
            raise AuthorizationError(f"operation requires a level-{level} administrator")

    def require_admin(self, user: User, action: str) -> None:
        """IT-group gate: top-level headship plus the named permission."""
        self.require_level(user, 3)
        if action not in self.effective_permissions(user):
            raise AuthorizationError(f"{action} permission required")

    # -- users -------------------------------------------------------------

    def user_create(
        self,
        actor: User,
        username: str,
        name: str,
        password: str,
        roles: Iterable[int] = (),
        direct_permissions: Iterable[str] = (),
        member_parts: Iterable[int] = (),
    ) -> User:
        self.require_admin(actor, "user.admin")
        username = require_text(username, "username")
        name = require_text(name, "name")
        require_text(password, "password")
        role_ids = sorted(set(roles))
        perms = self._validated_permissions(direct_permissions)
        member_ids = sorted(set(member_parts))
        encoded = hash_password(password)
        with self.store.transaction() as txn:
            if txn.one('SELECT id FROM "user" WHERE username = ?', (username,)):
                raise DuplicateError(f"username {username!r} already exists")
            for role_id in role_ids:
                if not txn.one('SELECT id FROM "role" WHERE id = ?', (role_id,)):
                    raise ValidationError(f"unknown role {role_id}")
            for part_id in member_ids:
                if not txn.one("SELECT id FROM university_part WHERE id = ?", (part_id,)):
                    raise ValidationError(f"unknown university part {part_id}")
            user_id = txn.insert(
                "user", version=0, username=username, name=name, password_hash=encoded
            )
            for role_id in role_ids:
                txn.insert("user_roles", role_id=role_id, user_id=user_id)
            for perm in sorted(perms):
                txn.insert("user_permissions", user_id=user_id, permissions_string=perm)
            for part_id in member_ids:
                txn.insert("user_staff_membership_parts", university_part_id=part_id, user_id=user_id)
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.INSERT,
                class_name="User",
                object_id=user_id,
                object_version=0,
            )
        return User(id=user_id, version=0, username=username, name=name)

    def user_update(
        self,
        actor: User,
        user_id: int,
        *,
        name: str | None = None,
        password: str | None = None,
        roles: Iterable[int] | None = None,
        member_parts: Iterable[int] | None = None,
        version: int | None = None,
    ) -> User:
        self.require_admin(actor, "user.admin")
        with self.store.transaction() as txn:
            row = txn.one('SELECT * FROM "user" WHERE id = ?', (user_id,))
            if row is None:
                raise NotFoundError(f"no user {user_id}")
            if version is not None and version != row["version"]:
                raise StaleVersionError(f"user {user_id} changed since version {version}")
            diffs: list[tuple[str, str | None, str | None]] = []
            if name is not None and name != row["name"]:
                require_text(name, "name")
                diffs.append(("name", row["name"], name))
                txn.execute('UPDATE "user" SET name = ? WHERE id = ?', (name, user_id))
            if password is not None:
                require_text(password, "password")
                txn.execute(
                    'UPDATE "user" SET password_hash = ? WHERE id = ?',
                    (hash_password(password), user_id),
                )
                diffs.append(("password", None, "(changed)"))
            if roles is not None:
                new_roles = sorted(set(roles))
                old_roles = self._role_names(txn, user_id)
                for role_id in new_roles:
                    if not txn.one('SELECT id FROM "role" WHERE id = ?', (role_id,)):
                        raise ValidationError(f"unknown role {role_id}")
                txn.execute("DELETE FROM user_roles WHERE user_id = ?", (user_id,))
                for role_id in new_roles:
                    txn.insert("user_roles", role_id=role_id, user_id=user_id)
                renamed = self._role_names(txn, user_id)
                if renamed != old_roles:
                    diffs.append(("roles", ", ".join(old_roles), ", ".join(renamed)))
            if member_parts is not None:
                new_parts = sorted(set(member_parts))
                old_names = self._member_part_names(txn, user_id)
                for part_id in new_parts:
                    if not txn.one("SELECT id FROM university_part WHERE id = ?", (part_id,)):
                        raise ValidationError(f"unknown university part {part_id}")
                txn.execute(
                    "DELETE FROM user_staff_membership_parts WHERE user_id = ?", (user_id,)
                )
                for part_id in new_parts:
                    txn.insert(
                        "user_staff_membership_parts",
                        university_part_id=part_id,
                        user_id=user_id,
                    )
                new_names = self._member_part_names(txn, user_id)
                if new_names != old_names:
                    diffs.append(("memberParts", ", ".join(old_names), ", ".join(new_names)))
            if not diffs:
                return self._user_from_row(txn.one('SELECT * FROM "user" WHERE id = ?', (user_id,)))
            new_version = row["version"] + 1
            txn.execute(
                'UPDATE "user" SET version = ? WHERE id = ? AND version = ?',
                (new_version, user_id, row["version"]),
            )
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.UPDATE,
                class_name="User",
                object_id=user_id,
                object_version=new_version,
                diffs=diffs,
            )
            updated = txn.one('SELECT * FROM "user" WHERE id = ?', (user_id,))
        return self._user_from_row(updated)

    def user_delete(self, actor: User, user_id: int) -> None:
        self.require_admin(actor, "user.admin")
        with self.store.transaction() as txn:
            row = txn.one('SELECT * FROM "user" WHERE id = ?', (user_id,))
            if row is None:
                raise NotFoundError(f"no user {user_id}")
            headed = txn.query(
                "SELECT p.name FROM user_managed_parts m"
                " JOIN university_part p ON p.id = m.university_part_id WHERE m.user_id = ?",
                (user_id,),
            )
            if headed:
                names = ", ".join(r["name"] for r in headed)
                raise InUseError(f"user heads {names}; remove the headship first")
            for table, column in (
                ("request", "requester_id"),
                ("request", "user_assigned_id"),
                ("asset", "assignee_id"),
                ("location", "assignee_id"),
            ):
                if txn.one(f'SELECT 1 FROM "{table}" WHERE {column} = ? LIMIT 1', (user_id,)):
                    raise InUseError(f"user is referenced by {table}.{column}")
            txn.execute("DELETE FROM user_roles WHERE user_id = ?", (user_id,))
            txn.execute("DELETE FROM user_permissions WHERE user_id = ?", (user_id,))
            txn.execute("DELETE FROM user_staff_membership_parts WHERE user_id = ?", (user_id,))
            txn.execute('DELETE FROM "user" WHERE id = ?', (user_id,))
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.DELETE,
                class_name="User",
                object_id=user_id,
                object_version=row["version"],
            )
        with self._session_lock:
            stale = [t for t, s in self._sessions.items() if s["user_id"] == user_id]
            for token in stale:
                del self._sessions[token]

    def user_list(self, actor: User, page: int = 1, per_page: int = 20) -> Page:
        self.require_level(actor, 1)
        with self.store.read() as txn:
            rows = txn.query('SELECT * FROM "user" ORDER BY id')
        return paginate([self._user_from_row(r) for r in rows], page, per_page)

    def user_show(self, actor: User, user_id: int) -> User:
        self.require_level(actor, 1)
        return self.get_user(user_id)

    def get_user(self, user_id: int) -> User:
        with self.store.read() as txn:
            row = txn.one('SELECT * FROM "user" WHERE id = ?', (user_id,))
        if row is None:
            raise NotFoundError(f"no user {user_id}")
        return self._user_from_row(row)

    def find_user(self, username: str) -> User:
        with self.store.read() as txn:
            row = txn.one('SELECT * FROM "user" WHERE username = ?', (username,))
        if row is None:
            raise NotFoundError(f"no user named {username!r}")
        return self._user_from_row(row)

    def grants(self, user_id: int) -> UserGrants:
        with self.store.read() as txn:
            roles = txn.query("SELECT role_id FROM user_roles WHERE user_id = ?", (user_id,))
            perms = txn.query(
                "SELECT permissions_string FROM user_permissions WHERE user_id = ?", (user_id,)
            )
            managed = txn.query(
                "SELECT university_part_id FROM user_managed_parts WHERE user_id = ?", (user_id,)
            )
            member = txn.query(
                "SELECT university_part_id FROM user_staff_membership_parts WHERE user_id = ?",
                (user_id,),
            )
        return UserGrants(
            user_id=user_id,
            roles=frozenset(r["role_id"] for r in roles),
            direct_permissions=frozenset(r["permissions_string"] for r in perms),
            managed_parts=frozenset(r["university_part_id"] for r in managed),
            member_parts=frozenset(r["university_part_id"] for r in member),
        )

    # -- roles --------------------------------------------------------------

    def role_create(self, actor: User, name: str, permissions: Iterable[str] = ()) -> Role:
        self.require_admin(actor, "user.admin")
        name = require_text(name, "role name")
        perms = self._validated_permissions(permissions)
        with self.store.transaction() as txn:
            if txn.one('SELECT id FROM "role" WHERE name = ?', (name,)):
                raise DuplicateError(f"role {name!r} already exists")
            role_id = txn.insert("role", version=0, name=name)
            for perm in sorted(perms):
                txn.insert("role_permissions", role_id=role_id, permissions_string=perm)
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.INSERT,
                class_name="Role",
                object_id=role_id,
                object_version=0,
            )
        return Role(id=role_id, version=0, name=name, permissions=frozenset(perms))

    def role_update(
        self,
        actor: User,
        role_id: int,
        *,
        name: str | None = None,
        permissions: Iterable[str] | None = None,
        version: int | None = None,
    ) -> Role:
        self.require_admin(actor, "user.admin")
        with self.store.transaction() as txn:
            row = txn.one('SELECT * FROM "role" WHERE id = ?', (role_id,))
            if row is None:
                raise NotFoundError(f"no role {role_id}")
            if version is not None and version != row["version"]:
                raise StaleVersionError(f"role {role_id} changed since version {version}")
            diffs: list[tuple[str, str | None, str | None]] = []
            if name is not None and name != row["name"]:
                require_text(name, "role name")
                clash = txn.one('SELECT id FROM "role" WHERE name = ? AND id != ?', (name, role_id))
                if clash:
                    raise DuplicateError(f"role {name!r} already exists")
                diffs.append(("name", row["name"], name))
                txn.execute('UPDATE "role" SET name = ? WHERE id = ?', (name, role_id))
            if permissions is not None:
                perms = self._validated_permissions(permissions)
                old = sorted(
                    r["permissions_string"]
                    for r in txn.query(
                        "SELECT permissions_string FROM role_permissions WHERE role_id = ?",
                        (role_id,),
                    )
                )
                if sorted(perms) != old:
                    txn.execute("DELETE FROM role_permissions WHERE role_id = ?", (role_id,))
                    for perm in sorted(perms):
                        txn.insert("role_permissions", role_id=role_id, permissions_string=perm)
                    diffs.append(("permissions", " ".join(old), " ".join(sorted(perms))))
            if not diffs:
                return self._role(txn, role_id)
            new_version = row["version"] + 1
            txn.execute('UPDATE "role" SET version = ? WHERE id = ?', (new_version, role_id))
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.UPDATE,
                class_name="Role",
                object_id=role_id,
                object_version=new_version,
                diffs=diffs,
            )
            return self._role(txn, role_id)

    def role_delete(self, actor: User, role_id: int) -> None:
        self.require_admin(actor, "user.admin")
        with self.store.transaction() as txn:
            row = txn.one('SELECT * FROM "role" WHERE id = ?', (role_id,))
            if row is None:
                raise NotFoundError(f"no role {role_id}")
            granted = txn.one("SELECT user_id FROM user_roles WHERE role_id = ? LIMIT 1", (role_id,))
            if granted:
                raise InUseError("role is still granted to users")
            txn.execute("DELETE FROM role_permissions WHERE role_id = ?", (role_id,))
            txn.execute('DELETE FROM "role" WHERE id = ?', (role_id,))
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.DELETE,
                class_name="Role",
                object_id=role_id,
                object_version=row["version"],
            )

    def role_list(self, actor: User, page: int = 1, per_page: int = 20) -> Page:
        self.require_level(actor, 3)
        with self.store.read() as txn:
            rows = txn.query('SELECT id FROM "role" ORDER BY id')
            roles = [self._role(txn, r["id"]) for r in rows]
        return paginate(roles, page, per_page)

    def role_show(self, actor: User, role_id: int) -> Role:
        self.require_level(actor, 3)
        with self.store.read() as txn:
            if txn.one('SELECT id FROM "role" WHERE id = ?', (role_id,)) is None:
                raise NotFoundError(f"no role {role_id}")
            return self._role(txn, role_id)

    def role_users(self, actor: User, role_id: int) -> list[User]:
        self.require_level(actor, 3)
        with self.store.read() as txn:
            if txn.one('SELECT id FROM "role" WHERE id = ?', (role_id,)) is None:
                raise NotFoundError(f"no role {role_id}")
            rows = txn.query(
                'SELECT u.* FROM "user" u JOIN user_roles ur ON ur.user_id = u.id'
                " WHERE ur.role_id = ? ORDER BY u.id",
                (role_id,),
            )
        return [self._user_from_row(r) for r in rows]

    # -- university parts ---------------------------------------------------

    def part_create(
        self,
        actor: User,
        name: str,
        parent_id: int | None,
        type: PartType | str,
        heads: Iterable[int] = (),
    ) -> UniversityPart:
        self.require_admin(actor, "user.admin")
        name = require_text(name, "part name")
        part_type = parse_enum(PartType, type, "part type")
        head_ids = sorted(set(heads))
        with self.store.transaction() as txn:
            if parent_id is not None and not txn.one(
                "SELECT id FROM university_part WHERE id = ?", (parent_id,)
            ):
                raise ValidationError(f"unknown parent part {parent_id}")
            for head in head_ids:
                if not txn.one('SELECT id FROM "user" WHERE id = ?', (head,)):
                    raise ValidationError(f"unknown user {head}")
            part_id = txn.insert(
                "university_part", version=0, name=name, parent_id=parent_id, type=part_type.value
            )
            for head in head_ids:
                txn.insert("user_managed_parts", university_part_id=part_id, user_id=head)
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.INSERT,
                class_name="UniversityPart",
                object_id=part_id,
                object_version=0,
            )
        return UniversityPart(
            id=part_id, version=0, name=name, parent_id=parent_id, type=part_type
        )

    def part_update(
        self,
        actor: User,
        part_id: int,
        *,
        name: str | None = None,
        parent_id: int | None | object = "unset",
        type: PartType | str | None = None,
        heads: Iterable[int] | None = None,
        version: int | None = None,
    ) -> UniversityPart:
        self.require_admin(actor, "user.admin")
        with self.store.transaction() as txn:
            row = txn.one("SELECT * FROM university_part WHERE id = ?", (part_id,))
            if row is None:
                raise NotFoundError(f"no university part {part_id}")
            if version is not None and version != row["version"]:
                raise StaleVersionError(f"part {part_id} changed since version {version}")
            diffs: list[tuple[str, str | None, str | None]] = []
            if name is not None and name != row["name"]:
                require_text(name, "part name")
                diffs.append(("name", row["name"], name))
                txn.execute("UPDATE university_part SET name = ? WHERE id = ?", (name, part_id))
            if parent_id != "unset" and parent_id != row["parent_id"]:
                self._check_no_cycle(txn, part_id, parent_id)
                old_name = self._part_name(txn, row["parent_id"])
                new_name = self._part_name(txn, parent_id)
                diffs.append(("parent", old_name, new_name))
                txn.execute(
                    "UPDATE university_part SET parent_id = ? WHERE id = ?", (parent_id, part_id)
                )
            if type is not None and parse_enum(PartType, type, "part type").value != row["type"]:
                new_type = parse_enum(PartType, type, "part type").value
                diffs.append(("type", row["type"], new_type))
                txn.execute(
                    "UPDATE university_part SET type = ? WHERE id = ?",
                    (new_type, part_id),
                )
            if heads is not None:
                new_heads = sorted(set(heads))
                for head in new_heads:
                    if not txn.one('SELECT id FROM "user" WHERE id = ?', (head,)):
                        raise ValidationError(f"unknown user {head}")
                old_names = self._head_names(txn, part_id)
                txn.execute("DELETE FROM user_managed_parts WHERE university_part_id = ?", (part_id,))
                for head in new_heads:
                    txn.insert("user_managed_parts", university_part_id=part_id, user_id=head)
                new_names = self._head_names(txn, part_id)
                if new_names != old_names:
                    diffs.append(("heads", ", ".join(old_names), ", ".join(new_names)))
            if not diffs:
                return self._part_from_row(row)
            new_version = row["version"] + 1
            txn.execute("UPDATE university_part SET version = ? WHERE id = ?", (new_version, part_id))
            self.audit.record_change(
                txn,
                actor=actor.username,
                event=AuditEvent.UPDATE,
                class_name="UniversityPart",
                object_id=part_id,
                object_version=new_version,
                diffs=diffs,
            )
            updated = txn.one("SELECT * FROM university_part WHERE id = ?", (part_id,))
        return self._part_from_row(updated)

    def part_list(self) -> list[UniversityPart]:
        with self.store.read() as txn:
            rows = txn.query("SELECT * FROM university_part ORDER BY id")
        return [self._part_from_row(r) for r in rows]

    def get_part(self, part_id: int) -> UniversityPart:
        with self.store.read() as txn:
            row = txn.one("SELECT * FROM university_part WHERE id = ?", (part_id,))
        if row is None:
            raise NotFoundError(f"no university part {part_id}")
        return self._part_from_row(row)

    def part_heads(self, part_id: int) -> list[User]:
        with self.store.read() as txn:
            rows = txn.query(
                'SELECT u.* FROM "user" u JOIN user_managed_parts m ON m.user_id = u.id'
                " WHERE m.university_part_id = ? ORDER BY u.id",
                (part_id,),
            )
        return [self._user_from_row(r) for r in rows]

    # -- internals ----------------------------------------------------------

    @staticmethod
    def _validated_permissions(permissions: Iterable[str]) -> set[str]:
        perms = set(permissions)
        unknown = perms - PERMISSIONS
        if unknown:
            raise ValidationError(f"unknown permissions: {', '.join(sorted(unknown))}")
        return perms

    @staticmethod
    def _child_index(txn: Transaction) -> dict[int, list[int]]:
        children: dict[int, list[int]] = {}
        for row in txn.query("SELECT id, parent_id FROM university_part"):
            if row["parent_id"] is not None:
                children.setdefault(row["parent_id"], []).append(row["id"])
        return children

    @staticmethod
    def _check_no_cycle(txn: Transaction, part_id: int, new_parent: int | None) -> None:
        seen = set()
        cursor = new_parent
        while cursor is not None:
            if cursor == part_id:
                raise ValidationError("change would make the part an ancestor of itself")
            if cursor in seen:
                raise ValidationError("parent chain already contains a cycle")
            seen.add(cursor)
            row = txn.one("SELECT parent_id FROM university_part WHERE id = ?", (cursor,))
            if row is None:
                raise ValidationError(f"unknown parent part {cursor}")
            cursor = row["parent_id"]

    @staticmethod
    def _part_name(txn: Transaction, part_id: int | None) -> str | None:
        if part_id is None:
            return None
        row = txn.one("SELECT name FROM university_part WHERE id = ?", (part_id,))
        return row["name"] if row else None

    @staticmethod
    def _head_names(txn: Transaction, part_id: int) -> list[str]:
        rows = txn.query(
            'SELECT u.username FROM "user" u JOIN user_managed_parts m ON m.user_id = u.id'
            " WHERE m.university_part_id = ? ORDER BY u.username",
            (part_id,),
        )
        return [r["username"] for r in rows]

    @staticmethod
    def _role_names(txn: Transaction, user_id: int) -> list[str]:
        rows = txn.query(
            'SELECT r.name FROM "role" r JOIN user_roles ur ON ur.role_id = r.id'
            " WHERE ur.user_id = ? ORDER BY r.name",
            (user_id,),
        )
        return [r["name"] for r in rows]

    @staticmethod
    def _member_part_names(txn: Transaction, user_id: int) -> list[str]:
        rows = txn.query(
            "SELECT p.name FROM university_part p"
            " JOIN user_staff_membership_parts m ON m.university_part_id = p.id"
            " WHERE m.user_id = ? ORDER BY p.name",
            (user_id,),
        )
        return [r["name"] for r in rows]

    @staticmethod
    def _user_from_row(row) -> User:
        return User(id=row["id"], version=row["version"], username=row["username"], name=row["name"])

    @staticmethod
    def _part_from_row(row) -> UniversityPart:
        return UniversityPart(
            id=row["id"],
            version=row["version"],
            name=row["name"],
            parent_id=row["parent_id"],
            type=PartType(row["type"]),
        )

    def _role(self, txn: Transaction, role_id: int) -> Role:
        row = txn.one('SELECT * FROM "role" WHERE id = ?', (role_id,))
        perms = txn.query(
            "SELECT permissions_string FROM role_permissions WHERE role_id = ?", (role_id,)
        )
        return Role(
            id=row["id"],
            version=row["version"],
            name=row["name"],
            permissions=frozenset(p["permissions_string"] for p in perms),
        )
