import sys

import pytest

from fibcheck.lab import catalog


@pytest.fixture(params=catalog.base_names())
def base(request):
    return catalog.get(request.param)


@pytest.fixture
def cat():
    return catalog.get


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.lines():
        terminalreporter.write_line(line)
