from __future__ import annotations

import pytest

from uuis.audit import AuditContractError, AuditEvent
from uuis.errors import AuthorizationError

from oracles import audit_scope_oracle


class TestRecordChange:
    def test_insert_then_iufaid_assignment_pattern(self, seeded, users):
        created = seeded.inventory.asset_create(
            users["dave"], name="tracked", type_id=2, location_id=6, owner_id=7
        )
        with seeded.store.read() as txn:
            rows = txn.query(
                "SELECT * FROM audit_log WHERE persisted_object_id = ? ORDER BY id", (created.id,)
            )
        insert_row, update_row = rows
        assert insert_row["event_name"] == "INSERT"
        assert insert_row["class_name"] == "Asset"
        assert insert_row["property_name"] is None
        assert insert_row["old_value"] is None and insert_row["new_value"] is None
        assert update_row["event_name"] == "UPDATE"
        assert update_row["property_name"] == "iufaID"
        assert update_row["old_value"] is None
        assert update_row["new_value"] == created.iufaid
        assert update_row["actor"] is None  # system-assigned follow-up write

    def test_approval_row_carries_actor_and_values(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="audit me")
        seeded.workflow.approve(users["phil"], created.id)
        seeded.workflow.execute(users["phil"], created.id)
        with seeded.store.read() as txn:
            row = txn.one(
                "SELECT * FROM audit_log WHERE class_name = 'Request'"
                " AND persisted_object_id = ? AND new_value = 'EXECUTED'",
                (created.id,),
            )
        assert row["actor"] == "phil"
        assert row["property_name"] == "status"
        assert row["old_value"] == "WAITING_EXECUTION"

    def test_noop_update_records_nothing(self, seeded, users):
        with seeded.store.read() as txn:
            before = txn.one("SELECT COUNT(*) AS n FROM audit_log")["n"]
        asset = seeded.inventory.get_asset(1)
        seeded.inventory.asset_edit(users["dave"], asset.id, {"name": asset.name})
        with seeded.store.read() as txn:
            assert txn.one("SELECT COUNT(*) AS n FROM audit_log")["n"] == before

    def test_record_change_outside_transaction_is_a_contract_violation(self, seeded):
        with seeded.store.read() as txn:
            with pytest.raises(AuditContractError):
                seeded.audit.record_change(
                    txn,
                    actor="dave",
                    event=AuditEvent.INSERT,
                    class_name="Asset",
                    object_id=1,
                )

    def test_long_values_clip_to_255(self, seeded, users):
        long_text = "d" * 255
        seeded.inventory.asset_edit(users["dave"], 1, {"details": long_text})
        with seeded.store.read() as txn:
            row = txn.one(
                "SELECT new_value FROM audit_log WHERE property_name = 'details'"
                " AND persisted_object_id = 1 ORDER BY id DESC"
            )
        assert len(row["new_value"]) == 255


class TestAuditList:
    def _burst(self, seeded, users, count: int) -> None:
        for n in range(count):
            seeded.inventory.asset_edit(users["dave"], 1, {"details": f"burst {n}"})

    def test_default_order_is_newest_first(self, seeded, users):
        self._burst(seeded, users, 5)
        page = seeded.audit.audit_list(seeded.security, users["dave"])
        ids = [e.id for e in page.rows]
        assert ids == sorted(ids, reverse=True)
        with seeded.store.read() as txn:
            newest = txn.one("SELECT MAX(id) AS m FROM audit_log")["m"]
        assert ids[0] == newest

    def test_per_page_ten_and_page_math(self, seeded, users):
        # 345 entries -> 35 pages at the default page size
        for n in range(345):
            with seeded.store.transaction() as txn:
                seeded.audit.record_change(
                    txn,
                    actor="dave",
                    event=AuditEvent.UPDATE,
                    class_name="Asset",
                    object_id=1,
                    diffs=[("details", str(n), str(n + 1))],
                )
        page = seeded.audit.audit_list(seeded.security, users["dave"])
        assert page.per_page == 10
        assert page.total == 345
        assert page.pages == 35
        assert len(page.rows) == 10

    def test_sort_ascending_flips_order(self, seeded, users):
        self._burst(seeded, users, 6)
        newest_first = seeded.audit.audit_list(seeded.security, users["dave"], per_page=1000)
        oldest_first = seeded.audit.audit_list(
            seeded.security, users["dave"], per_page=1000, order="asc"
        )
        assert [e.id for e in oldest_first.rows] == [e.id for e in reversed(newest_first.rows)]

    def test_requires_audit_view(self, seeded, users):
        with pytest.raises(AuthorizationError):
            seeded.audit.audit_list(seeded.security, users["kenny"])

    def test_scoped_admin_sees_only_own_parts_entries(self, seeded, users):
        seeded.inventory.asset_edit(users["dave"], 2, {"details": "biology asset"})  # owner 7
        seeded.inventory.asset_edit(users["dave"], 10, {"details": "sociology asset"})  # owner 8
        phil_page = seeded.audit.audit_list(seeded.security, users["phil"], per_page=1000)
        assert sorted(e.id for e in phil_page.rows) == sorted(
            audit_scope_oracle(seeded.store, users["phil"].id)
        )
        classes = {(e.class_name, e.persisted_object_id) for e in phil_page.rows}
        assert ("Asset", 10) not in classes
        assert ("Asset", 2) in classes

    def test_level_three_sees_everything_including_ownerless(self, seeded, users):
        seeded.security.role_create(users["dave"], "shadow", [])
        page = seeded.audit.audit_list(seeded.security, users["dave"], per_page=1000)
        assert any(e.class_name == "Role" for e in page.rows)
        assert sorted(e.id for e in page.rows) == sorted(
            audit_scope_oracle(seeded.store, users["dave"].id)
        )


class TestAuditInvariants:
    def test_every_mutation_leaves_at_least_one_entry(self, seeded, users):
        operations = [
            lambda: seeded.inventory.asset_create(
                users["dave"], name="m1", type_id=2, location_id=6, owner_id=7
            ),
            lambda: seeded.inventory.asset_edit(users["dave"], 1, {"details": "mutated"}),
            lambda: seeded.workflow.request_create(users["kenny"], comments="m3"),
            lambda: seeded.security.role_create(users["dave"], "m4", []),
            lambda: seeded.security.user_create(users["dave"], "m5", "M5", "pw"),
            lambda: seeded.inventory.location_create(
                users["dave"], name="m6", type_id=3, owner_id=2, parent_location_id=5
            ),
        ]
        for operation in operations:
            with seeded.store.read() as txn:
                before = txn.one("SELECT COUNT(*) AS n FROM audit_log")["n"]
            operation()
            with seeded.store.read() as txn:
                after = txn.one("SELECT COUNT(*) AS n FROM audit_log")["n"]
            assert after > before

    def test_append_only_row_count_never_decreases(self, seeded, users):
        counts = []
        with seeded.store.read() as txn:
            counts.append(txn.one("SELECT COUNT(*) AS n FROM audit_log")["n"])
        created = seeded.workflow.request_create(users["kenny"], comments="grow")
        with seeded.store.read() as txn:
            counts.append(txn.one("SELECT COUNT(*) AS n FROM audit_log")["n"])
        seeded.workflow.approve(users["phil"], created.id)
        with seeded.store.read() as txn:
            counts.append(txn.one("SELECT COUNT(*) AS n FROM audit_log")["n"])
        seeded.inventory.location_delete(users["dave"], 27)  # deletes never touch the log
        with seeded.store.read() as txn:
            counts.append(txn.one("SELECT COUNT(*) AS n FROM audit_log")["n"])
        assert counts == sorted(counts)
        assert counts[-1] > counts[0]

    def test_old_value_chains_to_previous_new_value(self, seeded, users):
        for n in range(5):
            seeded.inventory.asset_edit(users["dave"], 1, {"details": f"chain {n}"})
        with seeded.store.read() as txn:
            rows = txn.query(
                "SELECT old_value, new_value FROM audit_log WHERE persisted_object_id = 1"
                " AND class_name = 'Asset' AND property_name = 'details' ORDER BY id"
            )
        for previous, current in zip(rows, rows[1:]):
            assert current["old_value"] == previous["new_value"]

    def test_update_replay_reproduces_current_state(self, seeded, users):
        """Folding the audited diffs over an asset's history lands on its
        current audited-column values."""
        asset_id = seeded.inventory.asset_create(
            users["dave"], name="replay", type_id=2, location_id=6, owner_id=7
        ).id
        seeded.inventory.asset_edit(users["dave"], asset_id, {"details": "v1"})
        seeded.inventory.asset_edit(users["dave"], asset_id, {"name": "replayed", "details": "v2"})
        seeded.inventory.asset_edit(users["dave"], asset_id, {"location_id": 14})  # JB-301
        with seeded.store.read() as txn:
            rows = txn.query(
                "SELECT property_name, new_value FROM audit_log"
                " WHERE class_name = 'Asset' AND persisted_object_id = ?"
                " AND event_name = 'UPDATE' ORDER BY id",
                (asset_id,),
            )
        state: dict[str, str] = {}
        for row in rows:
            state[row["property_name"]] = row["new_value"]
        final = seeded.inventory.get_asset(asset_id)
        assert state["name"] == final.name
        assert state["details"] == final.details
        assert state["iufaID"] == final.iufaid
        assert state["location"] == seeded.inventory.get_location(final.location_id).name
