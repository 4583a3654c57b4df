"""Unified University Inventory System.

Scoped role-based administration over a university hierarchy: assets and
locations with dynamically typed properties, a request approval/execution
workflow, bulk CSV load, search, paginated reports, and a property-level
audit trail, exposed over HTTP+JSON.
"""

from uuis.system import UuisSystem

__version__ = "0.1.0"

__all__ = ["UuisSystem", "__version__"]
