from pathlib import Path

import pytest

from cutprice.model import load_instance

INSTANCES = Path(__file__).resolve().parent.parent / "instances"
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def ex():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_instance(INSTANCES / f"{name}.caj")
        return cache[name]

    return get


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
