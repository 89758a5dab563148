from dataclasses import replace

import pytest

from burnside.config import Config, load_config, set_config
from burnside.errors import ConfigError, OrderBoundError
from burnside.groups import parse_group


@pytest.fixture(autouse=True)
def no_cache_env(monkeypatch):
    monkeypatch.delenv("BURNSIDE_CACHE_DIR", raising=False)


def write(tmp_path, text):
    path = tmp_path / "config.yaml"
    path.write_text(text)
    return str(path)


def test_defaults_file_matches_dataclass():
    assert load_config() == Config()


def test_user_overrides(tmp_path):
    config = load_config(write(tmp_path, "tower:\n  depth: 20\norder_bound: 100\n"))
    assert config.depth == 20
    assert config.order_bound == 100
    assert config.window == Config().window


def test_empty_user_file(tmp_path):
    assert load_config(write(tmp_path, "")) == Config()


@pytest.mark.parametrize("text", [
    "tower:\n  depth: deep\n",
    "colour: red\n",
    "- 1\n- 2\n",
    "tower:\n  window: 6\n  min_depth: 5\n",
    "tower: [unclosed\n",
])
def test_bad_files(tmp_path, text):
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, text))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "nope.yaml"))


def test_cache_dir_precedence(tmp_path, monkeypatch):
    path = write(tmp_path, "cache:\n  dir: /from/file\n")
    assert load_config(path).cache_dir == "/from/file"
    assert load_config(path, cache_dir="/from/flag").cache_dir == "/from/flag"
    monkeypatch.setenv("BURNSIDE_CACHE_DIR", "/from/env")
    assert load_config(path, cache_dir="/from/flag").cache_dir == "/from/env"


def test_order_bound_from_config():
    set_config(replace(Config(), order_bound=10))
    with pytest.raises(OrderBoundError):
        parse_group("C12")
    assert parse_group("D5").order == 10
