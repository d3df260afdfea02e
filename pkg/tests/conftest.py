import pytest

from fuzz import make_b1, make_e1, make_r1, make_singleton, make_uneven


@pytest.fixture
def e1():
    return make_e1()


@pytest.fixture
def r1():
    return make_r1()


@pytest.fixture
def b1():
    return make_b1()


@pytest.fixture
def singleton():
    return make_singleton()


@pytest.fixture
def uneven():
    return make_uneven()
