"""Configuration defaults, read from defaults.yaml next to this file.

A user YAML file may override any subset of the keys. BURNSIDE_CACHE_DIR wins
over everything else for the cache directory.
"""
import os
from dataclasses import dataclass, replace

import yaml

from .errors import ConfigError

SCRIPT_DIR = os.path.dirname(os.path.abspath(__file__))
DEFAULTS_PATH = os.path.join(SCRIPT_DIR, "defaults.yaml")
CACHE_ENV_VAR = "BURNSIDE_CACHE_DIR"


@dataclass(frozen=True)
class Config:
    order_bound: int = 512
    depth: int = 12
    escalated_depth: int = 18
    window: int = 3
    min_depth: int = 5
    exhaustive_max_order: int = 64
    samples_per_element: int = 10
    seed: int = 1729
    cache_dir: str | None = None
    cache_format_version: int = 1


# yaml path -> Config field
_KEYS = {
    ("order_bound",): "order_bound",
    ("tower", "depth"): "depth",
    ("tower", "escalated_depth"): "escalated_depth",
    ("tower", "window"): "window",
    ("tower", "min_depth"): "min_depth",
    ("checks", "exhaustive_max_order"): "exhaustive_max_order",
    ("checks", "samples_per_element"): "samples_per_element",
    ("checks", "seed"): "seed",
    ("cache", "dir"): "cache_dir",
    ("cache", "format_version"): "cache_format_version",
}


def _flatten(data, prefix=()):
    for key, value in data.items():
        path = prefix + (str(key),)
        if isinstance(value, dict):
            yield from _flatten(value, path)
        else:
            yield path, value


def _apply(config, data, source):
    if data is None:
        return config
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: expected a mapping at the top level")
    changes = {}
    for path, value in _flatten(data):
        field = _KEYS.get(path)
        if field is None:
            raise ConfigError(f"{source}: unknown key '{'.'.join(path)}'")
        if field != "cache_dir" and not isinstance(value, int):
            raise ConfigError(f"{source}: '{'.'.join(path)}' must be an integer")
        changes[field] = value
    return replace(config, **changes)


def load_config(path=None, cache_dir=None):
    """Build a Config from defaults.yaml, an optional user file and the environment."""
    with open(DEFAULTS_PATH) as f:
        config = _apply(Config(), yaml.safe_load(f), DEFAULTS_PATH)
    if path is not None:
        try:
            with open(path) as f:
                user = yaml.safe_load(f)
        except OSError as e:
            raise ConfigError(f"cannot read config file {path}: {e}") from e
        except yaml.YAMLError as e:
            raise ConfigError(f"{path}: {e}") from e
        config = _apply(config, user, path)
    if cache_dir is not None:
        config = replace(config, cache_dir=cache_dir)
    env_dir = os.environ.get(CACHE_ENV_VAR)
    if env_dir:
        config = replace(config, cache_dir=env_dir)
    if config.min_depth < config.window + 1:
        raise ConfigError("tower.min_depth must exceed tower.window")
    return config


_active = None


def get_config():
    global _active
    if _active is None:
        _active = load_config()
    return _active


def set_config(config):
    global _active
    _active = config
