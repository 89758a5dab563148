import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from burnside import config, lattice  # noqa: E402
from burnside.groups import parse_group  # noqa: E402

_groups = {}


def group(spec):
    """Parsed groups are shared across tests; they are immutable."""
    if spec not in _groups:
        _groups[spec] = parse_group(spec)
    return _groups[spec]


@pytest.fixture(autouse=True)
def default_config():
    config.set_config(config.Config())
    yield
    lattice.configure_cache(None)
    config.set_config(config.Config())


@pytest.fixture
def S3():
    return group("S3")


@pytest.fixture
def S4():
    return group("S4")
