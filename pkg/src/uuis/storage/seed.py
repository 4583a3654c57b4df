"""Canonical demo fixture.

Loads the reference dataset the reports and walkthroughs are pinned
against: the ten-part university tree, the John Budweiser Building with 27
locations, four asset types, 104 assets distributed so the by-location
report counts come out right, eleven users across all four levels, and the
fourteen historical requests. Raw rows only: the fixture represents data
imported before the system went live, so it emits no audit entries.

Every seeded user's password equals their username (test fixture only).
"""

from __future__ import annotations

from functools import lru_cache

from uuis.inventory import generate_iufaid
from uuis.security import hash_password
from uuis.storage.store import Store, StoreError

PARTS = [
    # id, name, parent_id, type
    (1, "IT Group", None, "GROUP"),
    (2, "Inventory Group", 1, "GROUP"),
    (3, "University of Arctica", 2, "UNIVERSITY"),
    (4, "Faculty of Arts and Science", 3, "FACULTY"),
    (5, "Faculty of Computer Science", 3, "FACULTY"),
    (6, "Faculty of Engineering", 3, "FACULTY"),
    (7, "Department of Biology", 4, "DEPARTMENT"),
    (8, "Department of Sociology", 4, "DEPARTMENT"),
    (9, "Department of Software Engineering", 5, "DEPARTMENT"),
    (10, "Department of Computer Theory", 5, "DEPARTMENT"),
]

ROLES = {
    1: (
        "administrator",
        [
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
        ],
    ),
    2: (
        "approver",
        [
            "request.create",
            "request.approve",
            "request.execute",
            "asset.view",
            "asset.edit",
            "asset.create",
            "location.create",
            "location.edit",
            "report.view",
            "audit.view",
            "search.advanced",
        ],
    ),
    3: ("requester", ["request.create", "asset.view"]),
}

USERS = [
    # id, username, display name, role ids, headed part ids, member part ids
    (1, "dave", "Dave Gray", [1], [1], [1]),
    (2, "john", "John Doe", [1], [2], [2]),
    (3, "jack", "Jack Daniels", [2], [4], [4]),
    (4, "bob", "Bob Dylan", [2], [6], [6]),
    (5, "phil", "Phil Collins", [2], [7], [7]),
    (6, "marge", "Marge", [2], [2], [2]),
    (7, "Ali", "Ali", [2], [9], [9]),
    (8, "kenny", "Kenny", [3], [], [7]),
    (9, "bill", "Bill", [3], [], [8]),
    (10, "eric", "Eric", [3], [], [9]),
    (11, "mary", "Mary", [3], [], [10]),
]

LOCATION_TYPES = [(1, "Building"), (2, "Floor"), (3, "Room")]

LOCATIONS = [(1, "John Budweiser Building", None, 1)] + [
    (1 + n, f"JB Floor {n}", 1, 2) for n in range(1, 5)
]
_ROOM_LAYOUT = [
    (6, "JB-101", 2), (7, "JB-102", 2), (8, "JB-103", 2), (9, "JB-104", 2),
    (10, "JB-201", 3), (11, "JB-202", 3), (12, "JB-203", 3), (13, "JB-204", 3),
    (14, "JB-301", 4), (15, "JB-302", 4), (16, "JB-303", 4), (17, "JB-304", 4),
    (18, "JB-401", 5), (19, "JB-402", 5), (20, "JB-403", 5), (21, "JB-404", 5),
    (22, "JB-405", 5), (23, "JB-406", 5), (24, "JB-407", 5), (25, "JB-408", 5),
    (26, "JB-409", 5), (27, "JB-410", 5),
]
LOCATIONS += [(i, name, parent, 3) for i, name, parent in _ROOM_LAYOUT]

ASSET_TYPES = [
    (1, "Chair", "Seating"),
    (2, "Computer", "Workstations and servers"),
    (3, "Desk", "Work surfaces"),
    (4, "Table", "Shared surfaces"),
]
ASSET_TYPE_PROPERTIES = [
    # id, type_id, name, hint
    (1, 2, "CPU", "e.g. 2 GHz"),
    (2, 2, "RAM", "e.g. 4 GB"),
]

CHAIR, COMPUTER, DESK, TABLE = 1, 2, 3, 4

# Location name -> (owner part id, [(type, count)]); produces the pinned
# by-location report rows: JB-101 1/7/0, JB-102 0/20/8, JB-103 0/17/0,
# JB-104 0/19/1, JB-403 0/30/0 over the Chair/Computer/Table columns.
_ROOM_CONTENTS = [
    ("JB-101", 7, [(CHAIR, 1), (COMPUTER, 7)]),
    ("JB-102", 8, [(COMPUTER, 20), (TABLE, 8)]),
    ("JB-103", 9, [(COMPUTER, 17)]),
    ("JB-104", 10, [(COMPUTER, 19), (TABLE, 1)]),
    ("JB-403", 2, [(COMPUTER, 30)]),
]

_XEARTH_NAMES = [
    "xearthic", "xearthin", "xearthine", "xearthines", "xearthins",
    "xearthoma", "xearthomas", "xearthomata", "xearthone",
]

REQUESTS = [
    # id, requester username, part id, description, comments, submitted, status
    (1, "dave", 2, "Transfer now", "Transfer this item to my department",
     "2010-04-17T12:43:59Z", "NOT_EXECUTED"),
    (3, "kenny", 2, "The scroll wheel is not working", "The asset IUFAlD000000001",
     "2010-04-18T17:15:31Z", "EXECUTED"),
    (4, "bill", 2, "They have requested this",
     "Transfer this asset to the Department of Sociology, they have requested this.",
     "2010-04-18T21:32:54Z", "EXECUTED"),
    (5, "eric", 2, "It's not booting anymore",
     "The computer with iufaid IUFAlD000000492 is broken.",
     "2010-04-19T02:27:32Z", "EXECUTED"),
    (6, "bill", 2, "I want this computer", "Please", "2010-04-19T02:35:19Z", "EXECUTED"),
    (7, "bill", 7, "Transfer", "Please transfer to room JB-301, Department of Sociology",
     "2010-04-19T02:46:17Z", "REJECTED"),
    (8, "mary", 2, "Transfer this asset",
     "Transfer this asset to room JB-301, Department of Sociology",
     "2010-04-19T02:51:55Z", "EXECUTED"),
    (9, "eric", 2, "[object Object]", "[object Object]", "2010-04-19T03:05:33Z", "NOT_EXECUTED"),
    (10, "eric", 2, "my mouse don't work", "mouse", "2010-04-19T03:06:29Z", "EXECUTED"),
    (11, "Ali", 2, "[object Object]", "[object Object]", "2010-04-19T03:07:28Z", "EXECUTED"),
    (12, "eric", 2, "idk", "None available", "2010-04-19T19:20:09Z", "REJECTED"),
    (13, "phil", 2, "For sound mixing...", "[object Object]", "2010-04-19T19:30:31Z", "EXECUTED"),
    (14, "eric", 2, "[object Object]", "The IUFAlD is 0000000408", "2010-04-19T22:47:26Z", "EXECUTED"),
    (15, "bill", 2, "Transfer", "Transfer", "2010-04-19T23:26:37Z", "EXECUTED"),
]


@lru_cache(maxsize=None)
def _fixture_hash(password: str) -> str:
    # One hash per distinct password per process; seeding stays fast while
    # every stored hash remains salted and slow to brute-force.
    return hash_password(password)


def seed_fixture(store: Store) -> None:
    """Load the canonical fixture into an empty, migrated store."""
    with store.read() as txn:
        occupied = txn.one("SELECT id FROM university_part LIMIT 1") or txn.one(
            'SELECT id FROM "user" LIMIT 1'
        )
    if occupied:
        raise StoreError("refusing to seed a non-empty store")

    with store.transaction() as txn:
        for part_id, name, parent_id, part_type in PARTS:
            txn.insert(
                "university_part",
                id=part_id,
                version=0,
                name=name,
                parent_id=parent_id,
                type=part_type,
            )
        for role_id, (name, perms) in ROLES.items():
            txn.insert("role", id=role_id, version=0, name=name)
            for perm in perms:
                txn.insert("role_permissions", role_id=role_id, permissions_string=perm)
        user_ids: dict[str, int] = {}
        for user_id, username, display, role_ids, headed, member in USERS:
            txn.insert(
                "user",
                id=user_id,
                version=0,
                username=username,
                name=display,
                password_hash=_fixture_hash(username),
            )
            user_ids[username] = user_id
            for role_id in role_ids:
                txn.insert("user_roles", role_id=role_id, user_id=user_id)
            for part_id in headed:
                txn.insert("user_managed_parts", university_part_id=part_id, user_id=user_id)
            for part_id in member:
                txn.insert(
                    "user_staff_membership_parts", university_part_id=part_id, user_id=user_id
                )
        for type_id, name in LOCATION_TYPES:
            txn.insert("location_type", id=type_id, version=0, name=name, description=None)
        location_ids: dict[str, int] = {}
        for loc_id, name, parent_id, type_id in LOCATIONS:
            txn.insert(
                "location",
                id=loc_id,
                version=0,
                assignee_id=None,
                parent_location_id=parent_id,
                type_id=type_id,
                description=None,
                name=name,
                owner_id=2,
                capacity=10,
            )
            location_ids[name] = loc_id
        for type_id, name, description in ASSET_TYPES:
            txn.insert("asset_type", id=type_id, version=0, name=name, description=description)
        for prop_id, type_id, name, hint in ASSET_TYPE_PROPERTIES:
            txn.insert(
                "asset_type_property",
                id=prop_id,
                version=0,
                name=name,
                hint=hint,
                asset_type_id=type_id,
            )
            txn.insert(
                "asset_type_asset_type_properties",
                asset_type_property_id=prop_id,
                asset_type_id=type_id,
            )

        def add_asset(type_id, name, location, owner, legacyid=None, details=None, serial=None):
            cur = txn.execute(
                "INSERT INTO asset (version, iufaid, status, legacyid, location_id, assignee_id,"
                " parent_id, serial_number, type_id, details, name, owner_id)"
                " VALUES (1, NULL, 'AVAILABLE', ?, ?, NULL, NULL, ?, ?, ?, ?, ?)",
                (legacyid, location_ids[location], serial, type_id, details, name, owner),
            )
            asset_id = cur.lastrowid
            txn.execute(
                "UPDATE asset SET iufaid = ? WHERE id = ?", (generate_iufaid(asset_id), asset_id)
            )
            return asset_id

        add_asset(DESK, "eeasr", "JB-403", 2, legacyid="eewqj23232", details="asd")
        legacy_counter = 10000020
        type_names = {CHAIR: "chair", COMPUTER: "computer", DESK: "desk", TABLE: "table"}
        first_computer = None
        xearth_index = 0
        for room, owner, contents in _ROOM_CONTENTS:
            for type_id, count in contents:
                for n in range(1, count + 1):
                    if type_id == COMPUTER and room == "JB-403":
                        if xearth_index < len(_XEARTH_NAMES):
                            name = f"{_XEARTH_NAMES[xearth_index]}.concordia.ca"
                            xearth_index += 1
                        else:
                            name = f"xearth{n:02d}.concordia.ca"
                        asset_id = add_asset(
                            type_id, name, room, owner,
                            legacyid=str(legacy_counter), details="Dell PC",
                            serial=f"SN{legacy_counter}",
                        )
                        legacy_counter += 1
                    elif type_id == COMPUTER:
                        name = f"{room.lower()}-ws-{n:02d}.concordia.ca"
                        asset_id = add_asset(type_id, name, room, owner, details="Dell PC")
                        if first_computer is None:
                            first_computer = asset_id
                    else:
                        name = f"{room} {type_names[type_id]} {n}"
                        asset_id = add_asset(type_id, name, room, owner)
        # A couple of EAV values so searches and property views have data.
        txn.insert(
            "asset_property", version=0, asset_id=first_computer, value="2 GHz",
            asset_type_property_id=1,
        )
        txn.insert(
            "asset_property", version=0, asset_id=first_computer, value="4 GB",
            asset_type_property_id=2,
        )

        for req_id, username, part_id, description, comments, submitted, status in REQUESTS:
            txn.insert(
                "request",
                id=req_id,
                version=0,
                requester_id=user_ids[username],
                status=status,
                part_assigned_id=part_id,
                subject_id=1 if req_id == 1 else None,
                request_type="TRANSFER" if req_id == 1 else "OTHER",
                submission_date=submitted,
                title="Request 01" if req_id == 1 else description,
                user_assigned_id=None,
                description=description,
                comments=comments,
            )
