"""Acceptance suite: one test per acceptance criterion, exact tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion.
"""

from __future__ import annotations

import functools
import random
import string
import time
from collections import Counter

import pytest
from fastapi.testclient import TestClient

from uuis import UuisSystem
from uuis.api import create_app
from uuis.bulkload import RowResult, parse_csv, write_csv
from uuis.errors import AuthenticationError, AuthorizationError, TransitionError
from uuis.inventory import IUFAID_PATTERN
from uuis.reports import ReportFilter
from uuis.security import PartType
from uuis.workflow import RequestStatus

from oracles import (
    ALL_STATUSES,
    LEGAL_TRANSITIONS,
    assets_by_location_oracle,
    asset_scope_oracle,
    audit_scope_oracle,
    basic_search_oracle,
    request_bucket_oracle,
    request_report_oracle,
)


def criterion(name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[ACCEPTANCE] {name}: FAIL")
                raise
            print(f"[ACCEPTANCE] {name}: PASS")

        return wrapper

    return decorate


@criterion("workflow transition oracle (5x5, 4 legal / 21 illegal)")
def test_workflow_transition_oracle(seeded, users):
    legal, illegal = 0, 0
    for status in ALL_STATUSES:
        for target in ALL_STATUSES:
            probe = seeded.workflow.request_create(users["kenny"], comments="probe")
            with seeded.store.transaction() as txn:
                txn.execute("UPDATE request SET status = ? WHERE id = ?", (status, probe.id))
            if (status, target) in LEGAL_TRANSITIONS:
                moved = seeded.workflow.transition(users["dave"], probe.id, target)
                assert moved.status.value == target
                legal += 1
            else:
                with pytest.raises(TransitionError):
                    seeded.workflow.transition(users["dave"], probe.id, target)
                illegal += 1
    assert legal == 4
    assert illegal == 21
    # and the four legal edges are exactly the hand-written table
    assert LEGAL_TRANSITIONS == {
        ("WAITING_APPROVAL", "WAITING_EXECUTION"),
        ("WAITING_APPROVAL", "REJECTED"),
        ("WAITING_EXECUTION", "EXECUTED"),
        ("WAITING_EXECUTION", "NOT_EXECUTED"),
    }


@criterion("IUFAID format over 10,000 random creates; id 497 exact")
def test_iufaid_generation(seeded, users):
    rng = random.Random(497)
    dave = users["dave"]
    seen: set[str] = set()
    for n in range(10_000):
        created = seeded.inventory.asset_create(
            dave,
            name="rnd-" + "".join(rng.choices(string.ascii_lowercase, k=8)),
            type_id=rng.choice([1, 2, 3, 4]),
            location_id=rng.choice([6, 7, 8, 9, 20]),
            owner_id=rng.choice([2, 7, 8, 9, 10]),
        )
        assert IUFAID_PATTERN.match(created.iufaid), created.iufaid
        assert created.iufaid not in seen
        seen.add(created.iufaid)
    with seeded.store.read() as txn:
        row = txn.one("SELECT iufaid FROM asset WHERE id = 497")
    assert row["iufaid"] == "IUFAID0000000497"


@criterion("search contracts verbatim + brute-force oracle over 100 cases")
def test_search_contracts(seeded, users):
    dave = users["dave"]
    # 1024-character query truncates to 1023
    overlong = "c" * 1024
    page = seeded.search.basic_search(dave, overlong, per_page=10)
    from uuis.search import normalize_query

    assert len(normalize_query(overlong).normalized) == 1023
    assert page.total == 0

    # whitespace-only returns everything in scope
    blank = seeded.search.basic_search(dave, " ", per_page=100_000)
    assert blank.total == len(basic_search_oracle(seeded.store, dave.id, " "))
    assert blank.total > 0

    # empty returns none, with the no-results message at the API surface
    app = create_app(seeded)
    with TestClient(app) as client:
        client.post("/uuis/login", json={"username": "dave", "password": "dave"})
        body = client.get("/uuis/search/basic?q=").json()
        assert body["total"] == 0
        assert body["message"] == "No results match your criteria"
        decimal = client.get("/uuis/search/basic?q=10.08").json()
        assert decimal["total"] == 0

    # brute-force oracle equality over 100 random fixture/query pairs
    rng = random.Random(1023)
    words = ["computer", "JB", "dell", "transfer", "10", "xyz", "chair", "mouse"]
    checked = 0
    for _ in range(20):
        fixture = UuisSystem.open(":memory:")
        try:
            fixture.seed()
            dave_f = fixture.security.find_user("dave")
            for n in range(rng.randint(1, 5)):
                fixture.inventory.asset_create(
                    dave_f,
                    name="".join(rng.choices(string.ascii_lowercase, k=5)) + rng.choice(words),
                    type_id=rng.choice([1, 2, 3, 4]),
                    location_id=rng.choice([6, 7, 20]),
                    owner_id=rng.choice([2, 7, 8, 9]),
                )
            for _ in range(5):
                actor = fixture.security.find_user(rng.choice(["dave", "phil", "kenny", "jack"]))
                query = rng.choice(words + [" ", "", "ZZZ-no-match", "10.08"])
                got = [
                    (h.entity.value, h.id)
                    for h in fixture.search.basic_search(actor, query, per_page=100_000).rows
                ]
                assert got == basic_search_oracle(fixture.store, actor.id, query)
                checked += 1
        finally:
            fixture.close()
    assert checked == 100


@criterion("scope suite: lists equal the tree-walk oracle for every seeded user")
def test_scope_suite(seeded, users):
    # generate some audit entries first so the audit comparison has teeth
    seeded.inventory.asset_edit(users["dave"], 2, {"details": "touch biology"})
    seeded.inventory.asset_edit(users["dave"], 38, {"details": "touch software eng"})
    seeded.inventory.asset_edit(users["dave"], 75, {"details": "touch inventory"})
    probe = seeded.workflow.request_create(users["kenny"], comments="scope probe")
    seeded.workflow.approve(users["phil"], probe.id)

    for username, user in users.items():
        asset_page = seeded.inventory.asset_list(user, per_page=100_000)
        assert [a.id for a in asset_page.rows] == asset_scope_oracle(seeded.store, user.id), username

        buckets = seeded.workflow.request_list(user)
        wa, we, mine = request_bucket_oracle(seeded.store, user.id)
        assert [r.id for r in buckets.waiting_approval] == wa, username
        assert [r.id for r in buckets.waiting_execution] == we, username
        assert [r.id for r in buckets.mine] == mine, username

        if seeded.security.has_permission(user, "audit.view"):
            audit_page = seeded.audit.audit_list(seeded.security, user, per_page=100_000)
            assert sorted(e.id for e in audit_page.rows) == sorted(
                audit_scope_oracle(seeded.store, user.id)
            ), username
        else:
            with pytest.raises(AuthorizationError):
                seeded.audit.audit_list(seeded.security, user)

    # the Department of Biology head never sees Software-Engineering assets
    phil_assets = seeded.inventory.asset_list(users["phil"], per_page=100_000).rows
    software_eng = next(
        p.id for p in seeded.security.part_list() if p.name == "Department of Software Engineering"
    )
    assert all(a.owner_id != software_eng for a in phil_assets)
    assert len(phil_assets) > 0


@criterion("audit completeness: scripted session produces the exact entry multiset")
def test_audit_completeness(seeded, users):
    with seeded.store.read() as txn:
        assert txn.one("SELECT COUNT(*) AS n FROM audit_log")["n"] == 0

    asset = seeded.inventory.asset_create(
        users["dave"],
        name="scripted.concordia.ca",
        type_id=2,
        location_id=20,  # JB-403
        owner_id=7,      # Department of Biology
        details="Dell PC",
    )
    seeded.inventory.asset_edit(users["dave"], asset.id, {"location_id": 14})  # JB-301
    request = seeded.workflow.request_create(
        users["kenny"], title="Pickup", comments="please move it", subject_id=asset.id
    )
    assert request.part_assigned_id == 7
    seeded.workflow.assign(users["jack"], request.id, 2)      # Biology -> Inventory Group
    seeded.workflow.approve(users["marge"], request.id)
    seeded.workflow.execute(users["marge"], request.id)

    with seeded.store.read() as txn:
        rows = txn.query(
            "SELECT event_name, class_name, persisted_object_id, property_name,"
            " old_value, new_value, actor FROM audit_log"
        )
    got = Counter(tuple(r) for r in rows)
    expected = Counter(
        [
            ("INSERT", "Asset", asset.id, None, None, None, "dave"),
            ("UPDATE", "Asset", asset.id, "iufaID", None, asset.iufaid, None),
            ("UPDATE", "Asset", asset.id, "location", "JB-403", "JB-301", "dave"),
            ("INSERT", "Request", request.id, None, None, None, "kenny"),
            ("UPDATE", "Request", request.id, "partAssigned",
             "Department of Biology", "Inventory Group", "jack"),
            ("UPDATE", "Request", request.id, "status",
             "WAITING_APPROVAL", "WAITING_EXECUTION", "marge"),
            ("UPDATE", "Request", request.id, "status",
             "WAITING_EXECUTION", "EXECUTED", "marge"),
        ]
    )
    assert got == expected


@criterion("reports: pinned by-location counts, 14-request report, oracle equality")
def test_reports(seeded, users):
    dave = users["dave"]
    location_report = seeded.reports.assets_by_location(dave, ReportFilter(per_page=1000))
    cols = list(location_report.columns)
    chair, computer, table = cols.index("Chair"), cols.index("Computer"), cols.index("Table")
    pinned = {
        "JB-101": (1, 7, 0),
        "JB-102": (0, 20, 8),
        "JB-103": (0, 17, 0),
        "JB-104": (0, 19, 1),
        "JB-403": (0, 30, 0),
    }
    by_name = {row[1]: row for row in location_report.rows}
    for name, (n_chairs, n_computers, n_tables) in pinned.items():
        row = by_name[name]
        assert (row[chair], row[computer], row[table]) == (n_chairs, n_computers, n_tables), name
    assert location_report.total == 27

    oracle = assets_by_location_oracle(seeded.store)
    for row in location_report.rows:
        for type_name in cols[5:]:
            assert row[cols.index(type_name)] == oracle.get((row[0], type_name), 0)

    request_report = seeded.reports.requests(dave, ReportFilter(per_page=1000))
    assert request_report.total == 14
    codes = {row[6] for row in request_report.rows}
    assert codes == {"EX", "RJ", "NE"}
    assert [r[0] for r in request_report.rows] == request_report_oracle(seeded.store)
    rejected = seeded.reports.requests(
        dave, ReportFilter(status=RequestStatus.REJECTED, per_page=1000)
    )
    assert [r[0] for r in rejected.rows] == request_report_oracle(seeded.store, status="REJECTED")


@criterion("bulk: 100-row CSV equals 100 sequential creates; bad row isolated; < 10 s")
def test_bulk(users):
    started = time.monotonic()
    rows = [
        [f"BLK{n:04d}", "Computer", f"blk-{n:03d}.concordia.ca", "Dell PC", f"SNB{n:04d}",
         "JB-102", "Department of Sociology", "AVAILABLE"]
        for n in range(100)
    ]
    header = ["legacyid", "type", "name", "details", "serial_number", "location", "owner", "status"]
    csv_bytes = write_csv(header, rows)

    bulk_system = UuisSystem.open(":memory:")
    bulk_system.seed()
    outcomes = bulk_system.bulkload.bulk_insert(
        bulk_system.security.find_user("dave"), parse_csv(csv_bytes)
    )
    assert [o.result for o in outcomes] == [RowResult.CREATED] * 100

    seq_system = UuisSystem.open(":memory:")
    seq_system.seed()
    dave_seq = seq_system.security.find_user("dave")
    for row in rows:
        seq_system.inventory.asset_create(
            dave_seq,
            legacyid=row[0], name=row[2], details=row[3], serial_number=row[4],
            type_id=2, location_id=7, owner_id=8,
        )

    def dump(system_instance, table, drop=frozenset()):
        with system_instance.store.read() as txn:
            table_rows = txn.query(f'SELECT * FROM "{table}" ORDER BY id')
        return [
            tuple(sorted((k, r[k]) for k in r.keys() if k not in drop)) for r in table_rows
        ]

    assert dump(bulk_system, "asset") == dump(seq_system, "asset")
    drop = {"last_updated", "date_created", "uri"}
    assert dump(bulk_system, "audit_log", drop) == dump(seq_system, "audit_log", drop)

    # one bad row (unknown type) fails alone, with no partial writes
    bad_rows = [list(r) for r in rows]
    for row in bad_rows:
        row[0] = "X" + row[0]
        row[2] = "x" + row[2]
    bad_rows[49][1] = "Teleporter"
    bad_outcomes = bulk_system.bulkload.bulk_insert(
        bulk_system.security.find_user("dave"), parse_csv(write_csv(header, bad_rows))
    )
    tally = Counter(o.result for o in bad_outcomes)
    assert tally == {RowResult.CREATED: 99, RowResult.FAILED: 1}
    assert bad_outcomes[49].result is RowResult.FAILED
    with bulk_system.store.read() as txn:
        ghost = txn.one("SELECT COUNT(*) AS n FROM asset WHERE legacyid = ?", (bad_rows[49][0],))
        assert ghost["n"] == 0
    bulk_system.close()
    seq_system.close()
    assert time.monotonic() - started < 10.0


@criterion("fixed-bug regressions: auth retry, part show, empty subject")
def test_bug_regressions(seeded, users):
    # bug 1: many wrong passwords never corrupt authentication
    for n in range(40):
        with pytest.raises(AuthenticationError):
            seeded.security.authenticate("dave", f"wrong-{n}")
    with pytest.raises(AuthenticationError):
        seeded.security.authenticate("dave", "any password")
    session = seeded.security.authenticate("dave", "dave")
    assert seeded.security.resolve_session(session.token).username == "dave"

    app = create_app(seeded)
    with TestClient(app, raise_server_exceptions=False) as client:
        client.post("/uuis/login", json={"username": "dave", "password": "dave"})
        # bug 2: universityPart/show by id returns clean 200/404, never 500
        for part_id in list(range(1, 15)) + [9999]:
            response = client.get(f"/uuis/universityPart/show/{part_id}")
            assert response.status_code in (200, 404), part_id
        # request-creation bug: empty/unknown subject is a clean 400
        empty_subject = client.post(
            "/uuis/request/save", json={"comments": "broken", "subject_id": 123456}
        )
        assert empty_subject.status_code == 400
        assert empty_subject.json()["code"] == "validation"


@criterion("level semantics: create=0, department headship=1, university=3")
def test_level_semantics(seeded, users):
    created = seeded.security.user_create(users["dave"], "freshman", "Freshman", "pw")
    assert seeded.security.compute_level(created) == 0

    biology = next(p for p in seeded.security.part_list() if p.name == "Department of Biology")
    heads = [u.id for u in seeded.security.part_heads(biology.id)]
    seeded.security.part_update(users["dave"], biology.id, heads=heads + [created.id])
    assert seeded.security.compute_level(created) == 1

    university = next(p for p in seeded.security.part_list() if p.type is PartType.UNIVERSITY)
    existing = [u.id for u in seeded.security.part_heads(university.id)]
    seeded.security.part_update(users["dave"], university.id, heads=existing + [created.id])
    assert seeded.security.compute_level(created) == 3
