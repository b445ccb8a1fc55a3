import logging
import os
import sys
from functools import lru_cache
from pathlib import Path
from typing import Dict, Optional

import yaml
from dotenv import load_dotenv

load_dotenv()

PROJECT_ROOT = Path(__file__).resolve().parent.parent

TIME_BUDGET_ENV = "BICLIQUE_TIME_BUDGET"

LIMIT_KEYS = (
    "max_vertices_coloring",
    "max_edges_partition",
    "max_edges_cover_weight",
    "time_budget",
)


@lru_cache(maxsize=4)
def load_config(config_path: str = "configs/app_config.yaml") -> dict:
    cfg_path = PROJECT_ROOT / config_path
    if not cfg_path.exists():
        raise FileNotFoundError(f"Config file not found at {cfg_path}")
    with open(cfg_path, "r") as f:
        return yaml.safe_load(f)


def get_time_budget(default: Optional[float] = None) -> float:
    """Time budget in seconds: env var first, then the config file."""
    raw = os.getenv(TIME_BUDGET_ENV)
    if raw:
        try:
            value = float(raw)
        except ValueError:
            raise RuntimeError(f"{TIME_BUDGET_ENV} must be a number of seconds, got {raw!r}.")
        if value <= 0:
            raise RuntimeError(f"{TIME_BUDGET_ENV} must be positive, got {raw!r}.")
        return value
    if default is not None:
        return default
    return float(load_config()["oracle_limits"].get("time_budget", 300))


def oracle_limit_settings(overrides: Optional[Dict[str, float]] = None) -> Dict[str, float]:
    """
    Merge oracle guards from config, env and explicit overrides (in that order).
    """
    from .errors import UsageError

    cfg = load_config()["oracle_limits"]
    settings = {key: cfg[key] for key in LIMIT_KEYS}
    settings["time_budget"] = get_time_budget(float(cfg["time_budget"]))

    for key, value in (overrides or {}).items():
        if key not in LIMIT_KEYS:
            raise UsageError(f"Unknown oracle limit {key!r}; expected one of {', '.join(LIMIT_KEYS)}.")
        if value <= 0:
            raise UsageError(f"Oracle limit {key} must be positive, got {value}.")
        settings[key] = value
    return settings


def parse_limit_overrides(text: Optional[str]) -> Dict[str, float]:
    """Parse `key=value,key=value` as given to --limits."""
    from .errors import UsageError

    if not text:
        return {}
    overrides: Dict[str, float] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise UsageError(f"Malformed --limits entry {item!r}; expected key=value.")
        key, raw = (part.strip() for part in item.split("=", 1))
        try:
            value = float(raw) if key == "time_budget" else int(raw)
        except ValueError:
            raise UsageError(f"Limit {key} needs a number, got {raw!r}.")
        overrides[key] = value
    return overrides


def configure_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.INFO
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[%(levelname)s] %(message)s"))
    root = logging.getLogger("src")
    root.handlers[:] = [handler]
    root.setLevel(level)
    root.propagate = False
