import pytest
import numpy as np

from utils.utils import load_config

SEED = 12334567


@pytest.fixture(scope="session")
def config():
    return load_config()


@pytest.fixture(scope="function")
def seed():
    return SEED


@pytest.fixture(scope="function")
def rng():
    """Same numbers on every run."""
    return np.random.default_rng(SEED)
