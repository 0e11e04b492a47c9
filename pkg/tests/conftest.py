import pytest

from algrest.scenario import load_scenario
from algrest.restriction import ALL, CLOSED


@pytest.fixture(scope="session")
def t7():
    return load_scenario("t7")


@pytest.fixture(scope="session")
def t7_closed(t7):
    return t7.basis(CLOSED)


@pytest.fixture(scope="session")
def t7_all(t7):
    return t7.basis(ALL)


@pytest.fixture(scope="session")
def t8():
    return load_scenario("t8")
