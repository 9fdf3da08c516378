"""
Configuration and logging setup shared by every evencycle module.
Defaults live in _DEFAULT_CONFIG; evencycle/config.yaml (or the file named by
EVENCYCLE_CONFIG) overrides them key by key.
"""

import json
import logging
import os
import sys
from pathlib import Path

import yaml

_PKG_DIR = Path(__file__).resolve().parent
_CONFIG_CANDIDATES = (_PKG_DIR / "config.yaml", _PKG_DIR / "config.yml", _PKG_DIR / "config.json")

_DEFAULT_CONFIG = {
    "word_tag_bits": 8,
    "path_length_cap": 6,
    "bruteforce_max_n": 200,
    "exhaustive_max_n": 12,
    "verify_universe_cap": 14,
    "max_rounds": 1_000_000_000,
    "trace": False,
    "log_level": "WARNING",
    "lab": {
        "oracle_max_n": 200,
        "workers": 1,
        "report_format": "csv",
    },
}

LOG_FORMAT = "[%(name)s] %(message)s"


def load_config(path=None):
    """Load config from evencycle/config.yaml (or .yml / config.json). Missing keys or file → defaults."""
    cfg = json.loads(json.dumps(_DEFAULT_CONFIG))  # deep copy
    if path is None and os.environ.get("EVENCYCLE_CONFIG"):
        path = os.environ["EVENCYCLE_CONFIG"]
    candidates = [Path(path)] if path is not None else list(_CONFIG_CANDIDATES)
    for p in candidates:
        if not p.exists():
            continue
        try:
            raw = p.read_text(encoding="utf-8")
            if p.suffix.lower() in (".yaml", ".yml"):
                data = yaml.safe_load(raw)
            else:
                data = json.loads(raw)
            if not isinstance(data, dict):
                continue
            for k, v in data.items():
                if k == "lab" and isinstance(v, dict):
                    cfg.setdefault("lab", {}).update(v)
                else:
                    cfg[k] = v
            break
        except (json.JSONDecodeError, yaml.YAMLError, OSError):
            continue
    return cfg


def configure_logging(level=None):
    """Route evencycle/lab loggers to stderr as `[logger] message`."""
    level = level or CONFIG.get("log_level", "WARNING")
    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.WARNING)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    for name in ("evencycle", "lab"):
        logger = logging.getLogger(name)
        logger.handlers[:] = [handler]
        logger.setLevel(level)
        logger.propagate = False


CONFIG = load_config()
WORD_TAG_BITS = int(CONFIG.get("word_tag_bits", 8))
PATH_LENGTH_CAP = int(CONFIG.get("path_length_cap", 6))
BRUTEFORCE_MAX_N = int(CONFIG.get("bruteforce_max_n", 200))
EXHAUSTIVE_MAX_N = int(CONFIG.get("exhaustive_max_n", 12))
VERIFY_UNIVERSE_CAP = int(CONFIG.get("verify_universe_cap", 14))
MAX_ROUNDS = int(CONFIG.get("max_rounds", 1_000_000_000))
TRACE = bool(CONFIG.get("trace", False))
_LAB_CFG = CONFIG.get("lab", _DEFAULT_CONFIG["lab"])
ORACLE_MAX_N = int(_LAB_CFG.get("oracle_max_n", 200))
WORKERS = int(_LAB_CFG.get("workers", 1))
REPORT_FORMAT = str(_LAB_CFG.get("report_format", "csv"))
