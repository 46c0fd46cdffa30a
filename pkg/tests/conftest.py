import pytest

from cornerhomology.config import Config
from cornerhomology.fixtures import builtin_category


@pytest.fixture(scope="session")
def cfg():
    return Config(max_dim=3)


@pytest.fixture(scope="session")
def cfg4():
    return Config(max_dim=4)


@pytest.fixture(scope="session")
def fig1_cat(cfg):
    return builtin_category("fig1", cfg)


@pytest.fixture(scope="session")
def square_cat(cfg):
    return builtin_category("square", cfg)


@pytest.fixture(scope="session")
def cube3_cat(cfg):
    return builtin_category("cube3", cfg)


@pytest.fixture(scope="session")
def counterexample_cat():
    return builtin_category("counterexample")
