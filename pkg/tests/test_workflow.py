from __future__ import annotations

import threading

import pytest

from uuis.errors import (
    AuthorizationError,
    NotFoundError,
    TransitionError,
    ValidationError,
)
from uuis.workflow import ALLOWED_TRANSITIONS, RequestStatus, RequestType

from oracles import ALL_STATUSES, LEGAL_TRANSITIONS, request_bucket_oracle


def _force_status(system, request_id, status: str):
    with system.store.transaction() as txn:
        txn.execute("UPDATE request SET status = ? WHERE id = ?", (status, request_id))


class TestRequestCreate:
    def test_advanced_form(self, seeded, users):
        created = seeded.workflow.request_create(
            users["dave"],
            title="Request 01b",
            request_type=RequestType.TRANSFER,
            subject_id=1,
            comments="Transfer now",
        )
        assert created.status is RequestStatus.WAITING_APPROVAL
        assert created.request_type is RequestType.TRANSFER
        assert created.subject_id == 1
        # routed to the subject's owning part
        assert created.part_assigned_id == seeded.inventory.get_asset(1).owner_id

    def test_basic_form_is_other_with_no_subject(self, seeded, users):
        created = seeded.workflow.request_create(users["eric"], comments="my mouse don't work")
        assert created.request_type is RequestType.OTHER
        assert created.subject_id is None
        # routed to the requester's member part
        assert created.part_assigned_id == 9

    def test_unknown_subject_is_a_clean_validation_error(self, seeded, users):
        with pytest.raises(ValidationError):
            seeded.workflow.request_create(
                users["dave"], title="x", subject_id=987654, comments="c"
            )

    def test_requester_and_submission_date_never_change(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="squeaky chair")
        seeded.workflow.approve(users["phil"], created.id)
        seeded.workflow.execute(users["phil"], created.id)
        final = seeded.workflow.get_request(created.id)
        assert final.requester_id == created.requester_id
        assert final.submission_date == created.submission_date

    def test_create_lands_in_approvers_bucket(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="broken desk")
        assert created.part_assigned_id == 7  # kenny is Biology staff
        buckets = seeded.workflow.request_list(users["phil"])
        assert created.id in [r.id for r in buckets.waiting_approval]


class TestRequestList:
    def test_level_zero_sees_only_own_bucket(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="broken chair")
        buckets = seeded.workflow.request_list(users["kenny"])
        assert buckets.waiting_approval == ()
        assert buckets.waiting_execution == ()
        assert created.id in [r.id for r in buckets.mine]

    def test_buckets_match_oracle_for_all_seeded_users(self, seeded, users):
        seeded.workflow.request_create(users["kenny"], comments="one more")
        for user in users.values():
            buckets = seeded.workflow.request_list(user)
            wa, we, mine = request_bucket_oracle(seeded.store, user.id)
            assert [r.id for r in buckets.waiting_approval] == wa
            assert [r.id for r in buckets.waiting_execution] == we
            assert [r.id for r in buckets.mine] == mine

    def test_approval_moves_between_buckets(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="relocate")
        before = seeded.workflow.request_list(users["phil"])
        assert created.id in [r.id for r in before.waiting_approval]
        seeded.workflow.approve(users["phil"], created.id)
        after = seeded.workflow.request_list(users["phil"])
        assert created.id not in [r.id for r in after.waiting_approval]
        assert created.id in [r.id for r in after.waiting_execution]

    def test_buckets_one_and_two_are_disjoint(self, seeded, users):
        seeded.workflow.request_create(users["kenny"], comments="extra")
        for user in users.values():
            buckets = seeded.workflow.request_list(user)
            first = {r.id for r in buckets.waiting_approval}
            second = {r.id for r in buckets.waiting_execution}
            assert not (first & second)


class TestTransitions:
    def test_approve(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="approve me")
        updated = seeded.workflow.approve(users["phil"], created.id)
        assert updated.status is RequestStatus.WAITING_EXECUTION

    def test_approve_on_rejected_is_illegal(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="reject me")
        seeded.workflow.reject(users["phil"], created.id)
        with pytest.raises(TransitionError):
            seeded.workflow.approve(users["phil"], created.id)

    def test_approve_by_level_zero_is_denied(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="nice try")
        with pytest.raises(AuthorizationError):
            seeded.workflow.approve(users["kenny"], created.id)

    def test_reject_shows_in_my_requests(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="doomed")
        seeded.workflow.reject(users["phil"], created.id)
        mine = seeded.workflow.request_list(users["kenny"]).mine
        assert (created.id, RequestStatus.REJECTED) in [(r.id, r.status) for r in mine]

    def test_reject_twice_is_illegal(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="once only")
        seeded.workflow.reject(users["phil"], created.id)
        with pytest.raises(TransitionError):
            seeded.workflow.reject(users["phil"], created.id)

    def test_execute_path_and_bucket_removal(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="do it")
        seeded.workflow.approve(users["phil"], created.id)
        updated = seeded.workflow.execute(users["phil"], created.id)
        assert updated.status is RequestStatus.EXECUTED
        buckets = seeded.workflow.request_list(users["phil"])
        assert created.id not in [r.id for r in buckets.waiting_execution]

    def test_execute_on_waiting_approval_is_illegal(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="not yet")
        with pytest.raises(TransitionError):
            seeded.workflow.execute(users["phil"], created.id)

    def test_not_execute(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="can't")
        seeded.workflow.approve(users["phil"], created.id)
        updated = seeded.workflow.not_execute(users["phil"], created.id)
        assert updated.status is RequestStatus.NOT_EXECUTED
        with pytest.raises(TransitionError):
            seeded.workflow.not_execute(users["phil"], created.id)

    def test_exhaustive_status_target_enumeration(self, seeded, users):
        """Every (status, attempted target) pair against the oracle table."""
        legal_seen = 0
        for status in ALL_STATUSES:
            for target in ALL_STATUSES:
                created = seeded.workflow.request_create(users["kenny"], comments="probe")
                _force_status(seeded, created.id, status)
                if (status, target) in LEGAL_TRANSITIONS:
                    result = seeded.workflow.transition(users["dave"], created.id, target)
                    assert result.status.value == target
                    legal_seen += 1
                else:
                    with pytest.raises(TransitionError):
                        seeded.workflow.transition(users["dave"], created.id, target)
        assert legal_seen == 4

    def test_transition_table_shape(self):
        assert sum(len(targets) for targets in ALLOWED_TRANSITIONS.values()) == 4
        assert len(ALLOWED_TRANSITIONS) == 5

    def test_every_transition_writes_exactly_one_status_row(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="trace me")
        seeded.workflow.approve(users["phil"], created.id)
        seeded.workflow.execute(users["phil"], created.id)
        with seeded.store.read() as txn:
            rows = txn.query(
                "SELECT old_value, new_value, actor FROM audit_log"
                " WHERE class_name = 'Request' AND persisted_object_id = ?"
                " AND property_name = 'status' ORDER BY id",
                (created.id,),
            )
        assert [tuple(r) for r in rows] == [
            ("WAITING_APPROVAL", "WAITING_EXECUTION", "phil"),
            ("WAITING_EXECUTION", "EXECUTED", "phil"),
        ]

    def test_concurrent_approvals_one_wins(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="race")
        outcomes = []
        barrier = threading.Barrier(2)

        def attempt():
            barrier.wait()
            try:
                seeded.workflow.approve(users["phil"], created.id)
                outcomes.append("ok")
            except TransitionError:
                outcomes.append("illegal")

        threads = [threading.Thread(target=attempt) for _ in range(2)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(outcomes) == ["illegal", "ok"]


class TestAssign:
    def test_reassign_audits_part_names(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="move me")
        assert created.part_assigned_id == 7
        seeded.workflow.assign(users["jack"], created.id, 2)
        with seeded.store.read() as txn:
            row = txn.one(
                "SELECT * FROM audit_log WHERE class_name = 'Request'"
                " AND persisted_object_id = ? AND property_name = 'partAssigned'",
                (created.id,),
            )
        assert (row["old_value"], row["new_value"]) == ("Department of Biology", "Inventory Group")
        assert row["actor"] == "jack"

    def test_reassign_terminal_request_is_illegal(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="finished")
        seeded.workflow.reject(users["phil"], created.id)
        with pytest.raises(TransitionError):
            seeded.workflow.assign(users["dave"], created.id, 2)

    def test_reassign_out_of_scope_is_denied(self, seeded, users):
        created = seeded.workflow.request_create(users["eric"], comments="mine")
        assert created.part_assigned_id == 9  # Software Engineering
        with pytest.raises(AuthorizationError):
            seeded.workflow.assign(users["phil"], created.id, 7)

    def test_reassign_to_unknown_part(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="where")
        with pytest.raises(ValidationError):
            seeded.workflow.assign(users["jack"], created.id, 999)


class TestRequestShow:
    def test_requester_sees_own_rejected_request(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="view me")
        seeded.workflow.reject(users["phil"], created.id)
        detail = seeded.workflow.request_show(users["kenny"], created.id)
        assert detail.request.status is RequestStatus.REJECTED

    def test_unrelated_department_head_is_denied(self, seeded, users):
        created = seeded.workflow.request_create(users["kenny"], comments="private")
        assert created.part_assigned_id == 7
        with pytest.raises(AuthorizationError):
            seeded.workflow.request_show(users["Ali"], created.id)

    def test_unknown_request_not_found(self, seeded, users):
        with pytest.raises(NotFoundError):
            seeded.workflow.request_show(users["dave"], 31337)

    def test_show_includes_subject_iufaid(self, seeded, users):
        detail = seeded.workflow.request_show(users["dave"], 1)
        assert detail.subject_iufaid == "IUFAID0000000001"
