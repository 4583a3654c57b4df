"""Wires the domain services over one store."""

from __future__ import annotations

from pathlib import Path

from uuis.audit import AuditService
from uuis.bulkload import BulkLoadService
from uuis.inventory import InventoryService
from uuis.reports import ReportService
from uuis.search import SearchService
from uuis.security import SecurityService
from uuis.storage import Store, open_store
from uuis.storage.seed import seed_fixture
from uuis.workflow import WorkflowService


class UuisSystem:
    """All services of one running system instance."""

    def __init__(self, store: Store):
        self.store = store
        self.audit = AuditService(store)
        self.security = SecurityService(store, self.audit)
        self.inventory = InventoryService(store, self.security, self.audit)
        self.workflow = WorkflowService(store, self.security, self.inventory, self.audit)
        self.search = SearchService(store, self.security)
        self.bulkload = BulkLoadService(store, self.security, self.inventory)
        self.reports = ReportService(store, self.security)

    @classmethod
    def open(cls, path: str | Path = ":memory:") -> "UuisSystem":
        return cls(open_store(path))

    def seed(self) -> None:
        seed_fixture(self.store)

    def close(self) -> None:
        self.store.close()
