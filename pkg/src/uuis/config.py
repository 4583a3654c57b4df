"""Runtime configuration: config file, environment overrides, CLI flags.

Precedence, lowest to highest: built-in defaults, JSON config file,
UUIS_* environment variables, explicit CLI flags.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path


@dataclass
class Config:
    port: int = 8080
    store: str = "uuis.db"
    ui_dir: str | None = None
    seed: bool = False


def load_config(
    config_path: str | None = None,
    *,
    env: dict[str, str] | None = None,
    port: int | None = None,
    store: str | None = None,
    ui_dir: str | None = None,
    seed: bool | None = None,
) -> Config:
    cfg = Config()
    if config_path:
        data = json.loads(Path(config_path).read_text("utf-8"))
        if "port" in data:
            cfg.port = int(data["port"])
        if "store" in data:
            cfg.store = str(data["store"])
        if "ui_dir" in data:
            cfg.ui_dir = data["ui_dir"]
        if "seed" in data:
            cfg.seed = bool(data["seed"])
    env = os.environ if env is None else env
    if env.get("UUIS_PORT"):
        cfg.port = int(env["UUIS_PORT"])
    if env.get("UUIS_STORE"):
        cfg.store = env["UUIS_STORE"]
    if env.get("UUIS_UI_DIR"):
        cfg.ui_dir = env["UUIS_UI_DIR"]
    if env.get("UUIS_SEED"):
        cfg.seed = env["UUIS_SEED"].lower() in ("1", "true", "yes")
    if port is not None:
        cfg.port = port
    if store is not None:
        cfg.store = store
    if ui_dir is not None:
        cfg.ui_dir = ui_dir
    if seed is not None:
        cfg.seed = seed
    return cfg
