from __future__ import annotations

import sqlite3

import pytest

from uuis.audit import AuditService
from uuis.storage import StoreError, open_store
from uuis.storage.seed import seed_fixture

EXPECTED_TABLES = {
    "user",
    "role",
    "role_permissions",
    "user_roles",
    "user_permissions",
    "user_managed_parts",
    "user_staff_membership_parts",
    "university_part",
    "request",
    "location_type",
    "location_type_property",
    "location_type_location_type_properties",
    "location",
    "location_property",
    "audit_log",
    "asset_type",
    "asset_type_property",
    "asset_type_asset_type_properties",
    "asset",
    "asset_property",
}


def test_fresh_store_has_twenty_tables():
    store = open_store(":memory:")
    assert set(store.table_names()) == EXPECTED_TABLES
    assert len(store.table_names()) == 20


def test_reopen_existing_store_is_idempotent(tmp_path):
    path = tmp_path / "inv.db"
    store = open_store(path)
    with store.transaction() as txn:
        txn.insert("university_part", version=0, name="Root", parent_id=None, type="GROUP")
    store.close()

    again = open_store(path)
    with again.read() as txn:
        rows = txn.query("SELECT name FROM university_part")
    assert [r["name"] for r in rows] == ["Root"]
    again.close()


def test_corrupt_file_is_a_startup_error(tmp_path):
    path = tmp_path / "broken.db"
    path.write_bytes(b"this is not a database, not even close" * 4)
    with pytest.raises(StoreError):
        open_store(path)


def test_foreign_keys_enforced_even_bypassing_domain_validation(seeded):
    with pytest.raises(sqlite3.IntegrityError):
        with seeded.store.transaction() as txn:
            txn.execute(
                "INSERT INTO asset (version, status, location_id, type_id, name, owner_id)"
                " VALUES (0, 'AVAILABLE', 6, 9999, 'ghost', 7)"
            )


@pytest.mark.parametrize(
    "sql",
    [
        "INSERT INTO \"user\" (version, username, name, password_hash) VALUES (0, 'dave', 'x', 'y')",
        "INSERT INTO \"role\" (version, name) VALUES (0, 'administrator')",
        "INSERT INTO location_type (version, name) VALUES (0, 'Room')",
        "INSERT INTO asset (version, iufaid, status, location_id, type_id, name, owner_id)"
        " VALUES (0, 'IUFAID0000000001', 'AVAILABLE', 6, 2, 'dup', 7)",
        "INSERT INTO asset (version, legacyid, status, location_id, type_id, name, owner_id)"
        " VALUES (0, '10000020', 'AVAILABLE', 6, 2, 'dup', 7)",
    ],
)
def test_uniqueness_enforced_at_storage(seeded, sql):
    with pytest.raises(sqlite3.IntegrityError):
        with seeded.store.transaction() as txn:
            txn.execute(sql)


def test_transaction_atomicity_with_injected_audit_failure(seeded, users, monkeypatch):
    before_assets = _count(seeded, "asset")
    before_audit = _count(seeded, "audit_log")

    def explode(*args, **kwargs):
        raise RuntimeError("injected failure between domain write and audit write")

    monkeypatch.setattr(AuditService, "record_change", explode)
    with pytest.raises(RuntimeError):
        seeded.inventory.asset_create(
            users["dave"], name="ghost", type_id=2, location_id=6, owner_id=7
        )
    assert _count(seeded, "asset") == before_assets
    assert _count(seeded, "audit_log") == before_audit


def test_seed_refuses_non_empty_store(seeded):
    with pytest.raises(StoreError):
        seed_fixture(seeded.store)


def test_seed_counts(seeded):
    assert _count(seeded, "university_part") == 10
    assert _count(seeded, "location") == 27
    assert _count(seeded, "asset") == 104
    assert _count(seeded, "request") == 14
    assert _count(seeded, "audit_log") == 0


def test_seed_report_row_jb102(seeded, users):
    report = seeded.reports.assets_by_location(users["dave"])
    row = next(r for r in report.rows if r[1] == "JB-102")
    columns = list(report.columns)
    assert row[columns.index("Computer")] == 20
    assert row[columns.index("Table")] == 8


def _count(system_instance, table: str) -> int:
    with system_instance.store.read() as txn:
        return txn.one(f'SELECT COUNT(*) AS n FROM "{table}"')["n"]
