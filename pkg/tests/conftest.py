from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pointfree.order import chain_lattice, powerset_lattice  # noqa: E402
from pointfree.valuation import Valuation, check_valuation  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def sierpinski() -> Valuation:
    return check_valuation(chain_lattice(["0", "U", "1"]), ["0", "1/2", "1"])


@pytest.fixture
def sierpinski_collapsed() -> Valuation:
    return check_valuation(chain_lattice(["0", "U", "1"]), [0, 1, 1])


@pytest.fixture
def counting4() -> Valuation:
    return Valuation.additive(powerset_lattice("abcd"), [1, 1, 1, 1])


def pytest_terminal_summary(terminalreporter):
    results = sys.modules.get("test_acceptance")
    if results is None or not results.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results.RESULTS):
        terminalreporter.write_line(f"criterion {number:2d}: {results.RESULTS[number]}")
