"""Run configuration: built-in defaults overlaid with a TOML file."""
from __future__ import annotations

import copy
import sys
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .corpus import DEFAULT_KEYWORD_TABLE, DEFAULT_MIN_BODY_COUNT
from .fetch import DEFAULT_DELAY
from .match import DEFAULT_THRESHOLD
from .topics.coherence import DEFAULT_TOP_N
from .topics.inference import DEFAULT_INFER_ITERATIONS, DEFAULT_THETA_THRESHOLD
from .topics.lda import DEFAULT_BETA, DEFAULT_ITERATIONS, DEFAULT_TOP_WORDS
from .topics.select import DEFAULT_K_MAX, DEFAULT_K_MIN, DEFAULT_K_STEP

DEFAULTS: dict[str, Any] = {
    "seed": 20220601,
    "filter": {
        "keyword": "security",
        "min_body_count": DEFAULT_MIN_BODY_COUNT,
        "keywords": dict(DEFAULT_KEYWORD_TABLE["security"]),
        "apply_to_demand": True,
    },
    "match": {
        "threshold": DEFAULT_THRESHOLD,
        "include_title": True,
        "target_language": "en",
    },
    "translate": {
        "provider": "identity",
        "dictionary": "",
        "url": "",
    },
    "topics": {
        "k_min": DEFAULT_K_MIN,
        "k_max": DEFAULT_K_MAX,
        "k_step": DEFAULT_K_STEP,
        "k": 20,
        "alpha": 0.0,
        "beta": DEFAULT_BETA,
        "iterations": DEFAULT_ITERATIONS,
        "top_words": DEFAULT_TOP_WORDS,
        "npmi_top_n": DEFAULT_TOP_N,
        "min_df": 2,
        "max_df_fraction": 0.9,
        "stopwords": "en",
        "df_mode": "dominant",
        "theta_threshold": DEFAULT_THETA_THRESHOLD,
        "infer_iterations": DEFAULT_INFER_ITERATIONS,
    },
    "report": {
        "level": "L1",
        "min_gap": 0.0,
    },
    "fetch": {
        "politeness_delay": DEFAULT_DELAY,
        "retries": 2,
        "keywords": ["cyber-security", "it-sicherheit"],
    },
    "portals": {},
}


class ConfigError(ValueError):
    pass


def _merge(base: dict[str, Any], override: Mapping[str, Any], path: str = "") -> dict[str, Any]:
    for key, value in override.items():
        where = f"{path}{key}"
        if key in base and isinstance(base[key], dict):
            if not isinstance(value, Mapping):
                raise ConfigError(f"{where} must be a table")
            if key in ("portals", "keywords"):
                base[key].update(copy.deepcopy(dict(value)))
            else:
                _merge(base[key], value, where + ".")
        elif key in base or path.startswith("portals."):
            base[key] = copy.deepcopy(value)
        else:
            raise ConfigError(f"unknown config key {where!r}")
    return base


def load_config(path: str | Path | None = None) -> dict[str, Any]:
    """Defaults, overridden by the TOML file at ``path`` if given."""
    cfg = copy.deepcopy(DEFAULTS)
    if path is None:
        return cfg
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    base_dir = Path(path).resolve().parent
    cfg = _merge(cfg, data)
    cfg["_base_dir"] = str(base_dir)
    return cfg


def resolve_path(cfg: Mapping[str, Any], value: str) -> Path:
    """Config-relative paths resolve against the config file's directory."""
    p = Path(value)
    if p.is_absolute() or "_base_dir" not in cfg:
        return p
    return Path(cfg["_base_dir"]) / p
