import pytest

from thickenings.ext import Thickenings
from thickenings.ideals import example_catalog

ACCEPTANCE_LINES = []


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", help="run tests marked slow")
    parser.addoption("--run-stretch", action="store_true", help="run tests beyond the required table range")


def pytest_collection_modifyitems(config, items):
    for item in items:
        if "slow" in item.keywords and not config.getoption("--run-slow"):
            item.add_marker(pytest.mark.skip(reason="slow; use --run-slow"))
        if "stretch" in item.keywords and not config.getoption("--run-stretch"):
            item.add_marker(pytest.mark.skip(reason="stretch; use --run-stretch"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


_TOWERS = {}


def tower(name, field=None):
    """Shared :class:`Thickenings` per catalog entry, so powers are resolved once per session."""
    key = (name, field)
    if key not in _TOWERS:
        _, I, _ = example_catalog(name) if field is None else example_catalog(name, field)
        _TOWERS[key] = Thickenings(I)
    return _TOWERS[key]


@pytest.fixture(scope="session")
def segre():
    return tower("segre_2x3")
