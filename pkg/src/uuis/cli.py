"""Command line entry points: serve, migrate, seed, bulkload."""

from __future__ import annotations

import argparse
import logging
import sys as _sys
from pathlib import Path

from uuis.bulkload import parse_csv
from uuis.config import load_config
from uuis.errors import UuisError
from uuis.storage import open_store
from uuis.storage.seed import seed_fixture
from uuis.system import UuisSystem


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uuis", description="Unified University Inventory System")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP server")
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--store", default=None, help="path to the database file")
    serve.add_argument("--config", default=None, help="JSON config file")
    serve.add_argument("--ui-dir", default=None, help="directory with the built web UI")
    serve.add_argument(
        "--seed", action="store_true", default=None, help="load the demo fixture into an empty store"
    )

    migrate = sub.add_parser("migrate", help="create or upgrade the schema")
    migrate.add_argument("--store", default=None)
    migrate.add_argument("--config", default=None)

    seed = sub.add_parser("seed", help="load the demo fixture into an empty store")
    seed.add_argument("--store", default=None)
    seed.add_argument("--config", default=None)

    bulk = sub.add_parser("bulkload", help="load an asset CSV without the HTTP server")
    bulk.add_argument("file", help="CSV file path")
    bulk.add_argument("--store", default=None)
    bulk.add_argument("--config", default=None)
    bulk.add_argument("--user", required=True, help="username the rows are loaded as")
    bulk.add_argument(
        "--mode", choices=("insert", "update"), default="insert", help="insert or update rows"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    cfg = load_config(
        getattr(args, "config", None),
        port=getattr(args, "port", None),
        store=getattr(args, "store", None),
        ui_dir=getattr(args, "ui_dir", None),
        seed=getattr(args, "seed", None),
    )

    if args.command == "migrate":
        open_store(cfg.store).close()
        print(f"schema ready at {cfg.store}")
        return 0

    if args.command == "seed":
        store = open_store(cfg.store)
        seed_fixture(store)
        store.close()
        print(f"fixture loaded into {cfg.store}")
        return 0

    if args.command == "bulkload":
        system = UuisSystem.open(cfg.store)
        actor = system.security.find_user(args.user)
        data = Path(args.file).read_bytes()
        try:
            file = parse_csv(data)
            if args.mode == "insert":
                outcomes = system.bulkload.bulk_insert(actor, file)
            else:
                outcomes = system.bulkload.bulk_update(actor, file)
        except UuisError as exc:
            print(f"file rejected: {exc.message}", file=_sys.stderr)
            return 1
        failed = 0
        for outcome in outcomes:
            line = f"row {outcome.row_index}: {outcome.result.value}"
            if outcome.message:
                line += f" ({outcome.message})"
            print(line)
            if outcome.result.value == "FAILED":
                failed += 1
        return 1 if failed else 0

    if args.command == "serve":
        import uvicorn

        from uuis.api import create_app

        system = UuisSystem.open(cfg.store)
        if cfg.seed:
            with system.store.read() as txn:
                empty = txn.one("SELECT id FROM university_part LIMIT 1") is None
            if empty:
                seed_fixture(system.store)
        app = create_app(system, ui_dir=cfg.ui_dir)
        uvicorn.run(app, host="0.0.0.0", port=cfg.port)
        return 0

    return 2


if __name__ == "__main__":
    raise SystemExit(main())
