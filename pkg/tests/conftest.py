import pytest

from expsum_kit.arith import build_tables


@pytest.fixture(scope="session")
def tables_small():
    return build_tables(2_500)


@pytest.fixture(scope="session")
def tables_10k():
    return build_tables(10_000)


@pytest.fixture(scope="session")
def tables_100k():
    return build_tables(100_000)


@pytest.fixture(scope="session")
def tables_2m():
    return build_tables(2_000_000)
