from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

from postlie.algebra import pre_lie_corpus
from postlie.serialize import algebra_from_json

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def corpus():
    return pre_lie_corpus()


@pytest.fixture
def rng():
    return random.Random(20240611)


def load_algebra(name: str):
    return algebra_from_json(json.loads((DATA / f"{name}.json").read_text()))


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
