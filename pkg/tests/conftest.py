import pytest

from hopforce.graph import atlas_graphs, random_graphs


@pytest.fixture(scope="session")
def small_graphs():
    """Every graph on 1..5 vertices, one per isomorphism class"""
    return atlas_graphs(5)


@pytest.fixture(scope="session")
def corpus():
    """Every graph on 1..6 vertices"""
    return atlas_graphs(6)


@pytest.fixture(scope="session")
def random_corpus():
    return random_graphs(40, (7, 8), seed=7)
