import sys
from pathlib import Path

import pytest

from kvalued.core import split_multiplicities, trim
from kvalued.lagsep import lag_sep_covering, select_psi
from kvalued.machines import binary_counter, shifted_copy, shifted_copy_source

DATA = Path(__file__).parent / "data"


@pytest.fixture
def counter():
    return binary_counter()


@pytest.fixture
def counter_split(counter):
    return split_multiplicities(counter)[0]


@pytest.fixture
def shifted():
    return shifted_copy()


@pytest.fixture
def shifted_source():
    return shifted_copy_source()


@pytest.fixture
def selection(shifted):
    selected, _ = select_psi(lag_sep_covering(shifted, 1))
    return trim(selected)[0]


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("tests.test_acceptance")
    if module is None or not module.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(module.VERDICTS):
        terminalreporter.write_line(line)
