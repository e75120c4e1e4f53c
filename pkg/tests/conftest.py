from pathlib import Path

import pytest

from qdstrata.configuration import Configuration
from qdstrata.flatsurface import bundled_surface

DATA = Path(__file__).resolve().parents[1] / "src" / "qdstrata" / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def worked_example():
    return Configuration.from_json((DATA / "worked_example.json").read_text())


@pytest.fixture(scope="session")
def threesquare():
    return bundled_surface("threesquare")


@pytest.fixture(scope="session")
def pillowcase():
    return bundled_surface("pillowcase")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
