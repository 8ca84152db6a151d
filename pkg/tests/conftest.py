import pytest

from copgirth.expansion import second_eigenvalue
from copgirth.generators import lps_graph


@pytest.fixture(scope="session")
def lps513():
    return lps_graph(5, 13)


@pytest.fixture(scope="session")
def lps513_spectrum(lps513):
    return second_eigenvalue(lps513.graph)
