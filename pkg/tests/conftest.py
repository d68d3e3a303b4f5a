import pytest

from fareycorr.farey import farey_sequence
from fareycorr.numtheory import build_sieves


@pytest.fixture(scope="session")
def tables():
    # Large enough for the biggest consumer (the lambda=1e4 ladder point
    # needs totients up to ~pi^2*1e4/3); shared read-only everywhere.
    return build_sieves(100_000)


@pytest.fixture(scope="session")
def f50_points():
    return farey_sequence(50).unit_points()


@pytest.fixture(scope="session")
def f500_points():
    return farey_sequence(500).unit_points()
