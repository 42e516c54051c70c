import random
from pathlib import Path

import pytest

from cfskein.curves import load_curve_file
from cfskein.surface import load_surface_file

DATA = Path(__file__).parent / "data"

SURFACE_NAMES = ["triangle", "square", "monogon", "sphere3", "sphere4", "torus",
                 "twice_punctured_torus", "genus2_one_puncture"]

# filled by the acceptance tests, printed after the run
ACCEPTANCE_LINES = {}


def surface(name):
    return load_surface_file(DATA / f"{name}.surf")


@pytest.fixture(scope="session")
def surfaces():
    return {n: surface(n) for n in SURFACE_NAMES}


@pytest.fixture(scope="session")
def torus():
    return surface("torus")


@pytest.fixture(scope="session")
def torus_curves():
    return load_curve_file(DATA / "torus.curves")


@pytest.fixture
def rng():
    return random.Random(20261015)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
