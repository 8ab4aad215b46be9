import pytest

from src.domains.elementary import USet


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow enumeration checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def a():
    return USet(3, "a")


@pytest.fixture
def b():
    return USet(2, "b")
