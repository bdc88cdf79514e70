import pytest

from compass_kg import TripleStore, build_compass_schema, fixture


@pytest.fixture(scope="session")
def schema():
    return build_compass_schema()


@pytest.fixture(scope="session")
def fixture_store():
    return fixture()


@pytest.fixture()
def empty_store():
    return TripleStore()
