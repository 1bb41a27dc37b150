import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))


def pytest_configure(config):
    config.addinivalue_line("markers", "expensive: d = 3 sampling runs, skipped unless --expensive is given")


def pytest_addoption(parser):
    parser.addoption("--expensive", action="store_true", default=False, help="Run expensive tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--expensive"):
        return
    skip = pytest.mark.skip(reason="needs --expensive")
    for item in items:
        if "expensive" in item.keywords:
            item.add_marker(skip)
