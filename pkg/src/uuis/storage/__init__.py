from uuis.storage.store import Store, StoreError, Transaction, open_store, schema_sql

__all__ = ["Store", "StoreError", "Transaction", "open_store", "schema_sql"]
