from pathlib import Path

import pytest

from inctoric.cli import DATA, parse_basis, parse_spec
from inctoric.equivariant import truncated_equivariant_gb


def load_spec(name):
    return parse_spec((DATA / name).read_text())


def load_basis(name):
    return parse_basis((DATA / name).read_text())


@pytest.fixture(scope="session")
def square_spec():
    return load_spec("square_times_linear.spec")


@pytest.fixture(scope="session")
def square_eqgb(square_spec):
    return truncated_equivariant_gb(square_spec)


@pytest.fixture(scope="session")
def golden_gb():
    return load_basis("square_times_linear_gb.txt")


@pytest.fixture(scope="session")
def golden_markov():
    return load_basis("square_times_linear_markov.txt")


@pytest.fixture(scope="session")
def inc_spec():
    return load_spec("square_times_linear_inc.spec")


@pytest.fixture(scope="session")
def inc_eqgb(inc_spec):
    return truncated_equivariant_gb(inc_spec)


@pytest.fixture(scope="session")
def hyper_spec():
    return load_spec("hypersimplex.spec")


@pytest.fixture(scope="session")
def hyper_eqgb(hyper_spec):
    return truncated_equivariant_gb(hyper_spec)


@pytest.fixture
def data_dir() -> Path:
    return DATA
