import pytest

from udcdma import codebook


@pytest.fixture(scope="session")
def c4_eq14():
    return codebook.build_code_set(4, "eq14")


@pytest.fixture(scope="session")
def c8_eq10():
    return codebook.build_code_set(8, "eq10")


@pytest.fixture(scope="session")
def c8_eq14():
    return codebook.build_code_set(8, "eq14")


@pytest.fixture(scope="session")
def c16_eq10():
    return codebook.build_code_set(16, "eq10")


@pytest.fixture(scope="session")
def c16_eq14():
    return codebook.build_code_set(16, "eq14")
