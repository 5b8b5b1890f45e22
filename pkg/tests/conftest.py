"""
Shared fixtures: small desk graphs and the --runslow switch.
"""
import pytest

from src.graphs import generate
from src.schemas.family import CompleteSpec, CycleSpec, HypercubeSpec, TorusSpec


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow statistical tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def k2():
    return generate(CompleteSpec(n=2))


@pytest.fixture(scope="session")
def k3():
    return generate(CompleteSpec(n=3))


@pytest.fixture(scope="session")
def k5():
    return generate(CompleteSpec(n=5))


@pytest.fixture(scope="session")
def cycle6():
    return generate(CycleSpec(n=6))


@pytest.fixture(scope="session")
def cycle20():
    return generate(CycleSpec(n=20))


@pytest.fixture(scope="session")
def torus2_4():
    return generate(TorusSpec(d=2, n=4))


@pytest.fixture(scope="session")
def torus2_6():
    return generate(TorusSpec(d=2, n=6))


@pytest.fixture(scope="session")
def hypercube3():
    return generate(HypercubeSpec(n=3))
