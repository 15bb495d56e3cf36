import pytest

from shift2iet import build_factor_table, fixture_names, get_fixture

FIXTURES = tuple(fixture_names())


@pytest.fixture(scope="session")
def deep_tables():
    """One depth-100 factor table per bundled substitution, built once."""
    return {name: build_factor_table(get_fixture(name), 100) for name in FIXTURES}


@pytest.fixture(scope="session")
def tm100(deep_tables):
    return deep_tables["thue-morse"]


@pytest.fixture(scope="session")
def fib100(deep_tables):
    return deep_tables["fibonacci"]
