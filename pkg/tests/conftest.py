import random

import pytest

from bdsk.fixtures import FIXTURES


@pytest.fixture
def rng():
    return random.Random(20261014)


@pytest.fixture(params=sorted(FIXTURES))
def fixture_system(request):
    return request.param, FIXTURES[request.param]()


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
