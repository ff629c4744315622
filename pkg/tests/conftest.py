import pytest

from src.engine.geometry import build_boundary
from src.engine.sequences import make_sequence


@pytest.fixture(scope="session")
def seq_a():
    return make_sequence("A", q=1.0)


@pytest.fixture(scope="session")
def seq_b():
    return make_sequence("B", lam=0.5)


@pytest.fixture(scope="session")
def seq_c():
    return make_sequence("C", lam=0.4)


@pytest.fixture(scope="session")
def model_a(seq_a):
    return build_boundary(seq_a, 202)


@pytest.fixture(scope="session")
def model_b(seq_b):
    return build_boundary(seq_b, 32)


@pytest.fixture(scope="session")
def model_c(seq_c):
    return build_boundary(seq_c, 12)
