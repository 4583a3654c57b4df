"""SQLite-backed store with serialized transactions and snapshot reads.

The schema ships as a plain DDL script (schema.sql next to this module) so
the same tables can be created on any SQL database; the embedded engine is
the default deployment. Writers run one at a time inside an exclusive
transaction; readers see committed state only. Optimistic locking rides on
the per-row ``version`` columns, which every effective mutation increments.
"""

from __future__ import annotations

import sqlite3
import threading
from contextlib import contextmanager
from importlib import resources
from pathlib import Path
from typing import Any, Iterator


class StoreError(Exception):
    """The store could not be opened or migrated."""


def schema_sql() -> str:
    """The DDL script shipped with the package."""
    return resources.files("uuis.storage").joinpath("schema.sql").read_text("utf-8")


class Transaction:
    """Cursor wrapper handed to code running inside ``Store.transaction``."""

    def __init__(self, conn: sqlite3.Connection):
        self._conn = conn

    @property
    def active(self) -> bool:
        return self._conn.in_transaction

    def execute(self, sql: str, params: tuple = ()) -> sqlite3.Cursor:
        return self._conn.execute(sql, params)

    def query(self, sql: str, params: tuple = ()) -> list[sqlite3.Row]:
        return self._conn.execute(sql, params).fetchall()

    def one(self, sql: str, params: tuple = ()) -> sqlite3.Row | None:
        return self._conn.execute(sql, params).fetchone()

    def insert(self, table: str, **cols: Any) -> int:
        names = ", ".join(f'"{c}"' for c in cols)
        marks = ", ".join("?" for _ in cols)
        cur = self._conn.execute(
            f'INSERT INTO "{table}" ({names}) VALUES ({marks})', tuple(cols.values())
        )
        return int(cur.lastrowid)


class Store:
    """One SQLite database, safe for concurrent use from many threads.

    A single connection is shared; an RLock serializes access so every
    transaction (and every read block) observes a consistent snapshot.
    """

    def __init__(self, path: str | Path = ":memory:"):
        self.path = str(path)
        try:
            self._conn = sqlite3.connect(
                self.path, check_same_thread=False, isolation_level=None
            )
        except sqlite3.Error as exc:
            raise StoreError(f"cannot open store at {self.path}: {exc}") from exc
        self._conn.row_factory = sqlite3.Row
        self._lock = threading.RLock()
        try:
            self._conn.execute("PRAGMA foreign_keys = ON")
        except sqlite3.DatabaseError as exc:
            raise StoreError(f"store at {self.path} is not a database: {exc}") from exc

    def migrate(self) -> None:
        """Apply the schema; a no-op when the tables already exist."""
        with self._lock:
            try:
                self._conn.executescript(schema_sql())
            except sqlite3.DatabaseError as exc:
                raise StoreError(f"cannot migrate store at {self.path}: {exc}") from exc

    def close(self) -> None:
        self._conn.close()

    @contextmanager
    def transaction(self) -> Iterator[Transaction]:
        """All-or-nothing write scope; holds the store lock until commit."""
        with self._lock:
            self._conn.execute("BEGIN IMMEDIATE")
            txn = Transaction(self._conn)
            try:
                yield txn
            except BaseException:
                self._conn.execute("ROLLBACK")
                raise
            else:
                self._conn.execute("COMMIT")

    @contextmanager
    def read(self) -> Iterator[Transaction]:
        """Consistent read scope (no open write transaction)."""
        with self._lock:
            yield Transaction(self._conn)

    def table_names(self) -> list[str]:
        with self.read() as txn:
            rows = txn.query(
                "SELECT name FROM sqlite_master WHERE type = 'table' AND name NOT LIKE 'sqlite_%'"
            )
        return sorted(r["name"] for r in rows)


def open_store(path: str | Path = ":memory:") -> Store:
    """Open (creating and migrating if needed) the store at ``path``."""
    store = Store(path)
    store.migrate()
    return store
