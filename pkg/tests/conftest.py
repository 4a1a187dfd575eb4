from importlib import resources

import pytest

from pathgain.equations import PolySystem
from pathgain.io import read_json
from pathgain.network import problem_load

FIXTURES = resources.files("pathgain") / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


@pytest.fixture
def butterfly():
    return problem_load(fixture_path("butterfly.json"))


@pytest.fixture
def char2_system():
    return PolySystem.from_dict(read_json(fixture_path("char2_system.json")))


ACCEPTANCE: dict[int, str] = {}


def record(n: int, passed: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if passed else 'FAIL'} ({detail})"
    ACCEPTANCE[n] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
