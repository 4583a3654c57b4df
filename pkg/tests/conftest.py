from __future__ import annotations

import pytest

from uuis import UuisSystem

USERNAMES = ["dave", "john", "jack", "bob", "phil", "marge", "Ali", "kenny", "bill", "eric", "mary"]


@pytest.fixture
def system():
    instance = UuisSystem.open(":memory:")
    yield instance
    instance.close()


@pytest.fixture
def seeded(system):
    system.seed()
    return system


@pytest.fixture
def users(seeded):
    return {name: seeded.security.find_user(name) for name in USERNAMES}
