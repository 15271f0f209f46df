import time

import pytest

from normform.normprimes import build_sieve

SESSION_START = time.perf_counter()
ACCEPTANCE_LINES: list[str] = []


def pytest_collection_modifyitems(config, items):
    # the acceptance gate runs last so the wall-clock criterion sees the whole suite
    items.sort(key=lambda item: item.nodeid.startswith("tests/test_acceptance.py"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("sieve-cache")


@pytest.fixture(scope="session")
def sieve1(cache_dir):
    """Members of P_1 up to 10**7, shared by the scale tests."""
    return build_sieve(1, 10**7, cache_dir=cache_dir)


@pytest.fixture(scope="session")
def sieve1_small(cache_dir):
    return build_sieve(1, 10**5, cache_dir=cache_dir)
