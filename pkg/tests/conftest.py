import os

import pytest


@pytest.fixture(scope="session", autouse=True)
def sample_cache(tmp_path_factory):
    """Share large model and line samples across tests through the on-disk
    cache.  An existing ZETALAB_CACHE_DIR is respected."""
    if not os.environ.get("ZETALAB_CACHE_DIR"):
        os.environ["ZETALAB_CACHE_DIR"] = str(tmp_path_factory.mktemp("zcache"))
    return os.environ["ZETALAB_CACHE_DIR"]


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
