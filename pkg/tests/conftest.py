from pathlib import Path

import pytest

from stringalg.presentation import load_presentation

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def a3():
    return load_presentation(FIXTURES / "a3.sba")


@pytest.fixture(scope="session")
def a3nr():
    return load_presentation(FIXTURES / "a3nr.sba")


@pytest.fixture(scope="session")
def kronecker():
    return load_presentation(FIXTURES / "kronecker.sba")


@pytest.fixture(scope="session")
def gp():
    return load_presentation(FIXTURES / "gp.sba")


@pytest.fixture(scope="session")
def d4sub():
    return load_presentation(FIXTURES / "d4sub.sba")


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES
